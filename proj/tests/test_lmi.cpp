#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>

#include "sync/bench.hpp"
#include "sync/lmi.hpp"

using namespace synckit;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) M(i, j) = normal(rng);
  return M;
}

// Raw affine value F0 + sum_i y_i F_i (no sense/margin adjustment).
Matrix raw_value(const AffineConstraint& c, const Vector& y) {
  Matrix V = c.constant;
  for (const auto& [idx, Fi] : c.coefficients) V += y(idx) * Fi;
  return V;
}

SpectrumSlice slice(std::initializer_list<Complex> values) {
  SpectrumSlice s;
  s.eigenvalues = values;
  return s;
}

}  // namespace

TEST_CASE("synthesis problem block and constraint counting, n=2 m=1 nu=1") {
  const Plant p = plant_preset("osc");  // n = 2, m = 1
  const MultiplierSet m = MultiplierSet::scaled_identity(1, 4, 1.0);
  const SdpProblem prob = assemble_synthesis(p, slice({Complex(2.0, 0.0)}), m, 0.1, 20.0);

  // X (4) + Y (2) + Q1 (3) + Sigma1 (1) = 10 scalars.
  CHECK(prob.total_scalars() == 10);
  REQUIRE(prob.constraints.size() == 4);  // Eq-style block, Qe > 0, norm bound, trace cap
  CHECK(prob.constraints[0].size == 8);
  CHECK(prob.constraints[0].sense == ConstraintSense::Leq);
  CHECK(prob.constraints[1].size == 4);
  CHECK(prob.constraints[1].sense == ConstraintSense::Geq);
  CHECK(prob.constraints[2].size == 3);
  CHECK(prob.constraints[3].size == 1);  // trace cap
  CHECK(prob.margin == doctest::Approx(strictness_margin(p.A)));
}

TEST_CASE("analysis problem decision count, n=2 nu=2") {
  const Plant p = plant_preset("osc");
  const Matrix X = Matrix::Identity(2, 2);
  const Matrix Y = Matrix::Zero(1, 2);
  const SdpProblem prob =
      assemble_analysis(p, slice({Complex(1.0, 1.0), Complex(2.0, 0.0)}), X, Y, 0.0, 20.0);
  // Per mode: Z (16) + W (16) + Q (3) + Sigma (1) = 36; two modes = 72.
  CHECK(prob.total_scalars() == 72);
}

TEST_CASE("every emitted coefficient matrix is exactly symmetric") {
  const Plant p = plant_preset("osc");
  const MultiplierSet m = MultiplierSet::scaled_identity(2, 4, 0.3);
  const std::vector<SdpProblem> probs = {
      assemble_synthesis(p, slice({Complex(1.0, 1.0), Complex(2.0, 0.0)}), m, 0.2, 20.0),
      assemble_analysis(p, slice({Complex(1.0, 1.0)}), Matrix::Identity(2, 2),
                        Matrix::Zero(1, 2), 0.0, 20.0),
      assemble_common_q(p, {Complex(1.0, 1.0), Complex(2.0, 0.0)}, 0.1, 20.0),
      assemble_lyap_check(RealEmbedding{-Matrix::Identity(4, 4)}, 0.2)};
  for (const auto& prob : probs)
    for (const auto& c : prob.constraints) {
      CHECK((c.constant - c.constant.transpose()).norm() == 0.0);
      for (const auto& [idx, Fi] : c.coefficients)
        CHECK((Fi - Fi.transpose()).norm() == 0.0);
    }
}

TEST_CASE("structured inequality matches an independent evaluation") {
  std::mt19937_64 rng(5);
  const Plant p = plant_preset("osc");
  const Complex lambda(1.3, 0.7);
  const double mu = 0.37;
  MultiplierSet m;
  m.Z.push_back(random_matrix(4, 4, rng));
  m.W.push_back(random_matrix(4, 4, rng));
  SpectrumSlice s = slice({lambda});
  const SdpProblem prob = assemble_synthesis(p, s, m, mu, 20.0);

  // Pack a random structured assignment.
  const Matrix X = random_matrix(2, 2, rng);
  const Matrix Y = random_matrix(1, 2, rng);
  Matrix Q = random_matrix(2, 2, rng);
  Q = (0.5 * (Q + Q.transpose())).eval();
  Matrix S = random_matrix(2, 2, rng);
  S = (0.5 * (S - S.transpose())).eval();
  Vector y = Vector::Zero(prob.total_scalars());
  prob.block("X").pack(X, y);
  prob.block("Y").pack(Y, y);
  prob.block("Q1").pack(Q, y);
  prob.block("Sigma1").pack(S, y);

  // Independent construction of the 8x8 value from the definitions:
  // [[2 mu Qe, Qe], [Qe, 0]] + He{[[Theta Z, Theta W], [-Xe Z, -Xe W]]}.
  Matrix Qe(4, 4);
  Qe << Q, S, -S, Q;
  const Matrix AX = p.A * X;
  const Matrix BY = p.B * Y;
  const double a = lambda.real(), b = lambda.imag();
  Matrix Theta(4, 4);
  Theta << AX - a * BY, b * BY, -b * BY, AX - a * BY;
  Matrix Xe = Matrix::Zero(4, 4);
  Xe.topLeftCorner(2, 2) = X;
  Xe.bottomRightCorner(2, 2) = X;
  Matrix expected = Matrix::Zero(8, 8);
  expected.topLeftCorner(4, 4) = 2.0 * mu * Qe;
  expected.topRightCorner(4, 4) = Qe;
  expected.bottomLeftCorner(4, 4) = Qe;
  Matrix Bil(8, 8);
  Bil.topLeftCorner(4, 4) = Theta * m.Z[0];
  Bil.topRightCorner(4, 4) = Theta * m.W[0];
  Bil.bottomLeftCorner(4, 4) = -Xe * m.Z[0];
  Bil.bottomRightCorner(4, 4) = -Xe * m.W[0];
  expected += Bil + Bil.transpose();

  CHECK((raw_value(prob.constraints[0], y) - expected).norm() < 1e-10);
}

TEST_CASE("real eigenvalue gives a block-diagonal coupling term") {
  // For beta = 0 the off-diagonal n x n blocks of the 2n x 2n coupling
  // vanish: the constraint value at (X, Y, Q=0, Sigma=0) with Z = W = I is
  // He of [[Theta, Theta], [-Xe, -Xe]] with Theta = I_2 (x) (AX - lambda BY).
  std::mt19937_64 rng(9);
  const Plant p = plant_preset("osc");
  const double lambda = 1.7;
  const MultiplierSet m = MultiplierSet::scaled_identity(1, 4, 1.0);
  const SdpProblem prob = assemble_synthesis(p, slice({Complex(lambda, 0.0)}), m, 0.0, 20.0);

  const Matrix X = random_matrix(2, 2, rng);
  const Matrix Y = random_matrix(1, 2, rng);
  Vector y = Vector::Zero(prob.total_scalars());
  prob.block("X").pack(X, y);
  prob.block("Y").pack(Y, y);

  const Matrix V = raw_value(prob.constraints[0], y);
  const Matrix T = p.A * X - lambda * p.B * Y;
  // Off-diagonal 2x2 sub-blocks inside each 4x4 quadrant must be zero.
  for (int bi = 0; bi < 2; ++bi)
    for (int bj = 0; bj < 2; ++bj) {
      const Matrix quad = V.block(4 * bi, 4 * bj, 4, 4);
      CHECK(quad.topRightCorner(2, 2).norm() < 1e-12);
      CHECK(quad.bottomLeftCorner(2, 2).norm() < 1e-12);
      CHECK((quad.topLeftCorner(2, 2) - quad.bottomRightCorner(2, 2)).norm() < 1e-12);
    }
  CHECK((V.topLeftCorner(2, 2) - (T + T.transpose())).norm() < 1e-12);
}

TEST_CASE("analysis step rejects a frozen gain violating the norm bound") {
  const Plant p = plant_preset("osc");
  const Matrix X = Matrix::Identity(2, 2);
  const Matrix bad_Y = 100.0 * Matrix::Ones(1, 2);  // |Y X^{-1}| far above kappa = 2
  CHECK_THROWS_AS(assemble_analysis(p, slice({Complex(1.0, 0.0)}), X, bad_Y, 0.0, 2.0),
                  FrozenGainViolatesNormBound);
  // A compliant gain passes the precondition.
  CHECK_NOTHROW(assemble_analysis(p, slice({Complex(1.0, 0.0)}), X, Matrix::Zero(1, 2),
                                  0.0, 2.0));
}

TEST_CASE("common-Q constraints are conjugate invariant") {
  const Plant p = plant_preset("osc");
  const SdpProblem a = assemble_common_q(p, {Complex(1.0, 1.0)}, 0.1, 20.0);
  const SdpProblem b = assemble_common_q(p, {Complex(1.0, -1.0)}, 0.1, 20.0);
  REQUIRE(a.constraints.size() == b.constraints.size());
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    CHECK((a.constraints[i].constant - b.constraints[i].constant).norm() == 0.0);
    REQUIRE(a.constraints[i].coefficients.size() == b.constraints[i].coefficients.size());
    for (const auto& [idx, Fi] : a.constraints[i].coefficients)
      CHECK((Fi - b.constraints[i].coefficients.at(idx)).norm() == 0.0);
  }
}

TEST_CASE("common-Q block-size audit") {
  const Plant p = plant_preset("osc");
  const SdpProblem prob =
      assemble_common_q(p, {Complex(1.0, 0.0), Complex(2.0, 1.0), Complex(3.0, 0.0)}, 0.0,
                        20.0);
  // nu constraints of size 2n, plus Q > 0, the norm bound, and a trace cap.
  REQUIRE(prob.constraints.size() == 6);
  for (int k = 0; k < 3; ++k) CHECK(prob.constraints[k].size == 4);
  CHECK(prob.constraints[3].size == 2);
  CHECK(prob.constraints[4].size == 3);
  CHECK(prob.constraints[5].size == 1);
  CHECK_THROWS_AS(assemble_common_q(p, {}, 0.0, 20.0), EmptyValueList);
}

TEST_CASE("common-Q with a single real eigenvalue is feasible for the oscillator") {
  const Plant p = plant_preset("osc");
  const SdpOutcome out =
      check_feasible(assemble_common_q(p, {Complex(1.0, 0.0)}, 0.0, 20.0));
  CHECK(out.status == SdpStatus::Feasible);
}

TEST_CASE("common-Q feasibility is monotone in mu") {
  const Plant p = plant_preset("osc");
  const std::vector<Complex> vals = {Complex(1.0, 1.0), Complex(2.0, 0.0)};
  const SdpOutcome high = check_feasible(assemble_common_q(p, vals, 0.5, 20.0));
  REQUIRE(high.status == SdpStatus::Feasible);
  for (double mu : {0.0, 0.1, 0.25}) {
    const SdpOutcome low = check_feasible(assemble_common_q(p, vals, mu, 20.0));
    CHECK(low.status == SdpStatus::Feasible);
  }
}

TEST_CASE("certificate embedding and minimum eigenvalue") {
  Certificate cert;
  Matrix Q(2, 2);
  Q << 3, 1, 1, 2;
  Matrix S(2, 2);
  S << 0, 0.5, -0.5, 0;
  cert.Q.push_back(Q);
  cert.Sigma.push_back(S);
  const Matrix Qe = cert.Qe(0);
  REQUIRE(Qe.rows() == 4);
  CHECK((Qe.topLeftCorner(2, 2) - Q).norm() == 0.0);
  CHECK((Qe.topRightCorner(2, 2) - S).norm() == 0.0);
  CHECK((Qe.bottomLeftCorner(2, 2) + S).norm() == 0.0);
  CHECK((Qe - Qe.transpose()).norm() == 0.0);
  const double lam_min =
      Eigen::SelfAdjointEigenSolver<Matrix>(Qe, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  CHECK(cert.min_eigenvalue() == doctest::Approx(lam_min));
}

TEST_CASE("scaled-identity multipliers") {
  const MultiplierSet m = MultiplierSet::scaled_identity(3, 4, 0.3);
  REQUIRE(m.Z.size() == 3);
  REQUIRE(m.W.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK((m.Z[k] - Matrix::Identity(4, 4)).norm() == 0.0);
    CHECK((m.W[k] - 0.3 * Matrix::Identity(4, 4)).norm() == 0.0);
  }
}

TEST_CASE("strictness margin scales with the plant norm") {
  CHECK(strictness_margin(Matrix::Zero(2, 2)) == doctest::Approx(1e-6));
  CHECK(strictness_margin(3.0 * Matrix::Identity(2, 2)) == doctest::Approx(4e-6));
}

TEST_CASE("extract round-trips the packed synthesis variables") {
  std::mt19937_64 rng(17);
  const Plant p = plant_preset("osc");
  const MultiplierSet m = MultiplierSet::scaled_identity(1, 4, 1.0);
  const SdpProblem prob = assemble_synthesis(p, slice({Complex(2.0, 0.0)}), m, 0.0, 20.0);
  Vector y = Vector::Zero(prob.total_scalars());
  const Matrix X = random_matrix(2, 2, rng);
  const Matrix Y = random_matrix(1, 2, rng);
  prob.block("X").pack(X, y);
  prob.block("Y").pack(Y, y);
  const SynthesisVars v = extract_synthesis(prob, y, 1);
  CHECK((v.X - X).norm() == 0.0);
  CHECK((v.Y - Y).norm() == 0.0);
  REQUIRE(v.cert.Q.size() == 1);
}
