#pragma once

#include <Eigen/Dense>
#include <complex>

#include "sync/errors.hpp"

namespace synckit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Agent dynamics (A, B). Construction checks controllability of the pair
/// via a singular-value rank test on the controllability block matrix.
struct Plant {
  Matrix A;
  Matrix B;

  Plant(Matrix a, Matrix b);

  Eigen::Index n() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
};

/// Static state-feedback matrix K (m x n).
struct Gain {
  Matrix K;
};

/// Complex closed-loop mode A - lambda*B*K.
struct ComplexMode {
  ComplexMatrix Ak;
};

/// 2n x 2n real lifting of a complex mode; its spectrum is the union of the
/// mode's spectrum and the conjugate mode's spectrum.
struct RealEmbedding {
  Matrix Aek;
};

double spectral_abscissa(const Matrix& M);
double spectral_abscissa(const ComplexMatrix& M);

ComplexMode closed_loop_mode(const Plant& p, const Gain& k, Complex lambda);
RealEmbedding real_embedding(const Plant& p, const Gain& k, Complex lambda);

/// Solves A'P + P A + Q = 0 for symmetric P, A Hurwitz, via Bartels-Stewart
/// on the complex Schur form of A.
Matrix solve_lyapunov(const Matrix& A, const Matrix& Q);

/// Stabilizing solution of A'P + P A - 2b P B B' P + a I = 0.
/// Hamiltonian eigenvector method plus one Newton-Kleinman refinement.
Matrix solve_care(const Plant& p, double a, double b);

/// Largest singular value.
double matrix_2norm(const Matrix& M);

/// Rank test on [B, AB, ..., A^{n-1}B] with relative tolerance 1e-8.
bool is_controllable(const Matrix& A, const Matrix& B);

}  // namespace synckit
