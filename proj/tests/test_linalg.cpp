#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

#include "sync/bench.hpp"
#include "sync/linalg.hpp"

using namespace synckit;

namespace {

// Characteristic polynomial coefficients of M via Faddeev-LeVerrier:
// p(s) = s^n + c[1] s^{n-1} + ... + c[n].
std::vector<double> char_poly(const Matrix& M) {
  const Eigen::Index n = M.rows();
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[0] = 1.0;
  Matrix Mk = Matrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    Mk = M * Mk;
    c[static_cast<std::size_t>(k)] = -Mk.trace() / static_cast<double>(k);
    Mk += c[static_cast<std::size_t>(k)] * Matrix::Identity(n, n);
  }
  return c;
}

// Durand-Kerner simultaneous root iteration; independent of any
// eigenvalue routine.
std::vector<Complex> poly_roots(const std::vector<double>& c) {
  const std::size_t deg = c.size() - 1;
  std::vector<Complex> r(deg);
  const Complex seed(0.4, 0.9);
  Complex p(1.0, 0.0);
  for (std::size_t i = 0; i < deg; ++i, p *= seed) r[i] = p;
  auto eval = [&](Complex z) {
    Complex v = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) v = v * z + c[i];
    return v;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double step = 0.0;
    for (std::size_t i = 0; i < deg; ++i) {
      Complex denom(1.0, 0.0);
      for (std::size_t j = 0; j < deg; ++j)
        if (j != i) denom *= r[i] - r[j];
      const Complex delta = eval(r[i]) / denom;
      r[i] -= delta;
      step = std::max(step, std::abs(delta));
    }
    if (step < 1e-14) break;
  }
  return r;
}

}  // namespace

TEST_CASE("spectral abscissa of diagonal and rotation matrices") {
  Matrix D = Matrix::Zero(2, 2);
  D(0, 0) = -1.0;
  D(1, 1) = -2.0;
  CHECK(spectral_abscissa(D) == doctest::Approx(-1.0).epsilon(1e-12));

  Matrix J(2, 2);
  J << 0, -1, 1, 0;  // eigenvalues +-j
  CHECK(spectral_abscissa(J) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("x29 open-loop abscissa matches an independent root finder") {
  const Plant p = plant_preset("x29");
  const std::vector<Complex> roots = poly_roots(char_poly(p.A));
  double oracle = -1e18;
  for (const Complex& r : roots) oracle = std::max(oracle, r.real());
  CHECK(oracle > 0.0);  // open-loop unstable
  CHECK(spectral_abscissa(p.A) == doctest::Approx(oracle).epsilon(1e-8));
}

TEST_CASE("complex abscissa via shift invariance") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix M(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M(i, j) = Complex(gauss(rng), gauss(rng));
    const double base = spectral_abscissa(M);
    const double shift = gauss(rng);
    const ComplexMatrix Ms = M + shift * ComplexMatrix::Identity(3, 3);
    CHECK(spectral_abscissa(Ms) ==
          doctest::Approx(base + shift).epsilon(1e-9));
  }
}

TEST_CASE("closed-loop mode of the oscillator") {
  const Plant p = plant_preset("osc");
  Matrix K(1, 2);
  K << 1, 0;
  const ComplexMode mode = closed_loop_mode(p, Gain{K}, Complex(1.0, 1.0));
  ComplexMatrix expected(2, 2);
  expected << Complex(0, 0), Complex(-1, 0), Complex(0, -1), Complex(0, 0);
  CHECK((mode.Ak - expected).norm() < 1e-14);
}

TEST_CASE("real embedding structure") {
  const Plant p = plant_preset("osc");
  Matrix K(1, 2);
  K << 2, 3;

  SUBCASE("real eigenvalue gives a block-diagonal embedding") {
    const RealEmbedding e = real_embedding(p, Gain{K}, Complex(1.5, 0.0));
    const Matrix Acl = p.A - 1.5 * p.B * K;
    CHECK((e.Aek.topLeftCorner(2, 2) - Acl).norm() < 1e-14);
    CHECK((e.Aek.bottomRightCorner(2, 2) - Acl).norm() < 1e-14);
    CHECK(e.Aek.topRightCorner(2, 2).norm() == 0.0);
    CHECK(e.Aek.bottomLeftCorner(2, 2).norm() == 0.0);
  }

  SUBCASE("zero gain decouples to two copies of A") {
    const RealEmbedding e =
        real_embedding(p, Gain{Matrix::Zero(1, 2)}, Complex(1.0, 2.0));
    CHECK((e.Aek.topLeftCorner(2, 2) - p.A).norm() == 0.0);
    CHECK((e.Aek.bottomRightCorner(2, 2) - p.A).norm() == 0.0);
    CHECK(e.Aek.topRightCorner(2, 2).norm() == 0.0);
  }
}

TEST_CASE("embedding spectrum is the union of mode and conjugate spectra") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const int m = 1 + static_cast<int>(rng() % 2);
    Matrix A(n, n), B(n, m), K(m, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) B(i, j) = gauss(rng);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) K(i, j) = gauss(rng);
    if (!is_controllable(A, B)) continue;
    const Plant p(A, B);
    const Complex lambda(gauss(rng), gauss(rng));

    Eigen::ComplexEigenSolver<ComplexMatrix> mode_eigs(
        closed_loop_mode(p, Gain{K}, lambda).Ak);
    Eigen::ComplexEigenSolver<ComplexMatrix> conj_eigs(
        closed_loop_mode(p, Gain{K}, std::conj(lambda)).Ak);
    std::vector<Complex> expected;
    for (Eigen::Index i = 0; i < n; ++i) {
      expected.push_back(mode_eigs.eigenvalues()(i));
      expected.push_back(conj_eigs.eigenvalues()(i));
    }

    Eigen::EigenSolver<Matrix> emb(real_embedding(p, Gain{K}, lambda).Aek,
                                   false);
    std::vector<bool> used(expected.size(), false);
    for (Eigen::Index i = 0; i < emb.eigenvalues().size(); ++i) {
      double best = 1e18;
      std::size_t best_j = 0;
      for (std::size_t j = 0; j < expected.size(); ++j) {
        if (used[j]) continue;
        const double d = std::abs(emb.eigenvalues()(i) - expected[j]);
        if (d < best) {
          best = d;
          best_j = j;
        }
      }
      used[best_j] = true;
      CHECK(best < 1e-7 * (1.0 + std::abs(expected[best_j])));
    }
  }
}

TEST_CASE("lyapunov solver on scalar and diagonal problems") {
  // a p + p a + q = 0, a = -2, q = 4 -> p = 1.
  Matrix A(1, 1), Q(1, 1);
  A << -2;
  Q << 4;
  CHECK(solve_lyapunov(A, Q)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  Matrix D = Matrix::Zero(3, 3);
  D.diagonal() << -1, -2, -5;
  const Matrix P = solve_lyapunov(D, Matrix::Identity(3, 3));
  CHECK(P(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(P(1, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(P(2, 2) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(P(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("lyapunov solver residual and symmetry on random stable systems") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);
    Matrix A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
    A -= (spectral_abscissa(A) + 0.5) * Matrix::Identity(n, n);
    Matrix C(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) C(i, j) = gauss(rng);
    const Matrix Q = C.transpose() * C + Matrix::Identity(n, n);
    const Matrix P = solve_lyapunov(A, Q);
    CHECK((P - P.transpose()).norm() < 1e-10 * (1.0 + P.norm()));
    CHECK((A.transpose() * P + P * A + Q).norm() <
          1e-9 * (1.0 + P.norm()) * (1.0 + A.norm()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(P);
    CHECK(es.eigenvalues().minCoeff() > 0.0);  // Q > 0 forces P > 0
  }
  CHECK_THROWS_AS(solve_lyapunov(Matrix::Identity(2, 2), Matrix::Identity(2, 2)),
                  NotHurwitz);
}

TEST_CASE("care solver against the scalar closed form") {
  // 2 sigma p - 2 b p^2 + a = 0 -> p = (sigma + sqrt(sigma^2 + 2ab)) / (2b).
  Matrix B(1, 1);
  B << 1;
  for (const double sigma : {-1.0, 0.0, 1.0, 3.0}) {
    for (const double a : {0.5, 2.0}) {
      for (const double b : {0.5, 1.0, 4.0}) {
        Matrix A(1, 1);
        A << sigma;
        const double expected =
            (sigma + std::sqrt(sigma * sigma + 2.0 * a * b)) / (2.0 * b);
        const Matrix P = solve_care(Plant(A, B), a, b);
        CHECK(P(0, 0) == doctest::Approx(expected).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("care solver on the benchmark plants") {
  for (const char* name : {"osc", "x29"}) {
    const Plant p = plant_preset(name);
    const Matrix P = solve_care(p, 1.0, 1.0);
    CHECK((P - P.transpose()).norm() < 1e-10 * (1.0 + P.norm()));
    const Matrix residual = p.A.transpose() * P + P * p.A -
                            2.0 * P * p.B * p.B.transpose() * P +
                            Matrix::Identity(p.n(), p.n());
    CHECK(residual.norm() < 1e-7 * (1.0 + P.squaredNorm()));
    // Stabilizing: A - 2 b B B' P must be Hurwitz.
    const Matrix Acl = p.A - 2.0 * p.B * p.B.transpose() * P;
    CHECK(spectral_abscissa(Acl) < 0.0);
  }
}

TEST_CASE("matrix 2-norm") {
  CHECK(matrix_2norm(Matrix::Identity(3, 3)) == doctest::Approx(1.0));
  Matrix D = Matrix::Zero(2, 2);
  D.diagonal() << 3, -4;
  CHECK(matrix_2norm(D) == doctest::Approx(4.0));
  Matrix J(2, 2);
  J << 1, 1, 0, 1;
  CHECK(matrix_2norm(J) ==
        doctest::Approx(std::sqrt((3.0 + std::sqrt(5.0)) / 2.0)).epsilon(1e-12));
}

TEST_CASE("2-norm is invariant under orthogonal transforms") {
  std::mt19937_64 rng(47);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix M(3, 4), G(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 4; ++j) M(i, j) = gauss(rng);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) G(i, j) = gauss(rng);
    const Matrix Q = Eigen::HouseholderQR<Matrix>(G).householderQ();
    CHECK(matrix_2norm(Q * M) ==
          doctest::Approx(matrix_2norm(M)).epsilon(1e-10));
  }
}

TEST_CASE("controllability checks") {
  Matrix A(2, 2), B(2, 1);
  A << 0, 1, 0, 0;
  B << 0, 1;
  CHECK(is_controllable(A, B));  // double integrator
  Matrix B2(2, 1);
  B2 << 1, 0;  // input never excites the second state
  CHECK_FALSE(is_controllable(A, B2));
  CHECK_THROWS_AS(Plant(A, B2), std::invalid_argument);
  CHECK_THROWS_AS(Plant(A, Matrix::Zero(3, 1)), DimensionMismatch);
}
