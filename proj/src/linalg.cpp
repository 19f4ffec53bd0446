#include "sync/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace synckit {

namespace {

void require_finite(const Matrix& M, const char* what) {
  if (!M.allFinite()) throw NonFinite(std::string(what) + ": non-finite entries");
}

}  // namespace

bool is_controllable(const Matrix& A, const Matrix& B) {
  const Eigen::Index n = A.rows();
  Matrix ctrb(n, n * B.cols());
  Matrix block = B;
  for (Eigen::Index i = 0; i < n; ++i) {
    ctrb.middleCols(i * B.cols(), B.cols()) = block;
    block = A * block;
  }
  Eigen::JacobiSVD<Matrix> svd(ctrb);
  const auto& sv = svd.singularValues();
  const double tol = 1e-8 * sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  return rank == n;
}

Plant::Plant(Matrix a, Matrix b) : A(std::move(a)), B(std::move(b)) {
  if (A.rows() != A.cols() || B.rows() != A.rows())
    throw DimensionMismatch("Plant: A must be square and B.rows must equal A.rows");
  require_finite(A, "Plant.A");
  require_finite(B, "Plant.B");
  if (!is_controllable(A, B))
    throw std::invalid_argument("Plant: (A, B) is not controllable");
}

double spectral_abscissa(const Matrix& M) {
  require_finite(M, "spectral_abscissa");
  Eigen::EigenSolver<Matrix> es(M, /*computeEigenvectors=*/false);
  return es.eigenvalues().real().maxCoeff();
}

double spectral_abscissa(const ComplexMatrix& M) {
  if (!M.allFinite()) throw NonFinite("spectral_abscissa: non-finite entries");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(M, /*computeEigenvectors=*/false);
  return es.eigenvalues().real().maxCoeff();
}

ComplexMode closed_loop_mode(const Plant& p, const Gain& k, Complex lambda) {
  if (k.K.rows() != p.m() || k.K.cols() != p.n())
    throw DimensionMismatch("closed_loop_mode: K must be m x n");
  ComplexMatrix Ak = p.A.cast<Complex>() - lambda * (p.B * k.K).cast<Complex>();
  return ComplexMode{std::move(Ak)};
}

RealEmbedding real_embedding(const Plant& p, const Gain& k, Complex lambda) {
  if (k.K.rows() != p.m() || k.K.cols() != p.n())
    throw DimensionMismatch("real_embedding: K must be m x n");
  const Eigen::Index n = p.n();
  const Matrix BK = p.B * k.K;
  const double alpha = lambda.real();
  const double beta = lambda.imag();
  Matrix Aek(2 * n, 2 * n);
  Aek.topLeftCorner(n, n) = p.A - alpha * BK;
  Aek.topRightCorner(n, n) = beta * BK;
  Aek.bottomLeftCorner(n, n) = -beta * BK;
  Aek.bottomRightCorner(n, n) = p.A - alpha * BK;
  return RealEmbedding{std::move(Aek)};
}

Matrix solve_lyapunov(const Matrix& A, const Matrix& Q) {
  const Eigen::Index n = A.rows();
  if (Q.rows() != n || Q.cols() != n)
    throw DimensionMismatch("solve_lyapunov: A and Q must be same-size square");
  if (spectral_abscissa(A) >= 0.0)
    throw NotHurwitz("solve_lyapunov: A is not Hurwitz");

  // A = U T U*, T upper triangular. With Y = U* P U and Qt = U* Q U the
  // equation becomes T* Y + Y T = -Qt, solved column by column.
  Eigen::ComplexSchur<ComplexMatrix> schur(A.cast<Complex>());
  const ComplexMatrix& T = schur.matrixT();
  const ComplexMatrix& U = schur.matrixU();
  ComplexMatrix Qt = U.adjoint() * Q.cast<Complex>() * U;

  ComplexMatrix Y = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex rhs = -Qt(i, j);
      for (Eigen::Index l = 0; l < i; ++l) rhs -= std::conj(T(l, i)) * Y(l, j);
      for (Eigen::Index l = 0; l < j; ++l) rhs -= Y(i, l) * T(l, j);
      Y(i, j) = rhs / (std::conj(T(i, i)) + T(j, j));
    }
  }
  Matrix P = (U * Y * U.adjoint()).real();
  P = 0.5 * (P + P.transpose()).eval();

  const double residual = (A.transpose() * P + P * A + Q).norm();
  if (residual > 1e-9 * (Q.norm() + A.norm() * P.norm() + 1.0))
    throw IllConditioned("solve_lyapunov: residual check failed");
  return P;
}

Matrix solve_care(const Plant& p, double a, double b) {
  if (a <= 0.0 || b <= 0.0)
    throw std::invalid_argument("solve_care: a and b must be positive");
  const Eigen::Index n = p.n();
  const Matrix R = 2.0 * b * (p.B * p.B.transpose());
  const Matrix Qc = a * Matrix::Identity(n, n);

  Matrix H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = p.A;
  H.topRightCorner(n, n) = -R;
  H.bottomLeftCorner(n, n) = -Qc;
  H.bottomRightCorner(n, n) = -p.A.transpose();

  // Basis of the stable invariant subspace from the Hamiltonian spectrum.
  Eigen::ComplexEigenSolver<ComplexMatrix> es(H.cast<Complex>());
  ComplexMatrix V(2 * n, n);
  Eigen::Index found = 0;
  for (Eigen::Index i = 0; i < 2 * n && found < n; ++i) {
    if (es.eigenvalues()(i).real() < 0.0) V.col(found++) = es.eigenvectors().col(i);
  }
  if (found != n)
    throw NoStabilizingSolution("solve_care: Hamiltonian has no n-dimensional stable subspace");

  ComplexMatrix V1 = V.topRows(n);
  ComplexMatrix V2 = V.bottomRows(n);
  Eigen::FullPivLU<ComplexMatrix> lu(V1);
  if (!lu.isInvertible())
    throw NoStabilizingSolution("solve_care: singular subspace projection");
  Matrix P = (V2 * lu.inverse()).real();
  P = 0.5 * (P + P.transpose()).eval();

  // One Newton-Kleinman step: with Acl = A - R P, solve
  // Acl' P+ + P+ Acl + Qc + P R P = 0.
  {
    Matrix Acl = p.A - R * P;
    if (spectral_abscissa(Acl) < 0.0) {
      P = solve_lyapunov(Acl, Qc + P * R * P);
    }
  }

  const Matrix res = p.A.transpose() * P + P * p.A - P * R * P + Qc;
  const double scale = Qc.norm() + p.A.norm() * P.norm() + P.norm() * R.norm() * P.norm();
  if (res.norm() > 1e-8 * scale)
    throw ResidualTooLarge("solve_care: Riccati residual too large");
  const Matrix Acl_final = p.A - R * P;
  if (spectral_abscissa(Acl_final) >= 0.0)
    throw NoStabilizingSolution("solve_care: closed loop not stable");
  return P;
}

double matrix_2norm(const Matrix& M) {
  require_finite(M, "matrix_2norm");
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
}

}  // namespace synckit
