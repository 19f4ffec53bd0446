#include <doctest.h>

#include <random>

#include "sync/lmi.hpp"
#include "sync/sdp.hpp"

using namespace synckit;

namespace {

Matrix random_symmetric(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) M(i, j) = normal(rng);
  return 0.5 * (M + M.transpose()).eval();
}

Matrix random_skew(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) M(i, j) = normal(rng);
  return 0.5 * (M - M.transpose()).eval();
}

// A random Hurwitz real embedding [[M, N], [-N, M]] (the lifting of the
// complex matrix M + jN), shifted left of the requested abscissa. The
// structured P_ek certificate only exists for matrices of this form.
Matrix random_hurwitz(Eigen::Index d, double abscissa_below, std::mt19937_64& rng) {
  const Eigen::Index n = d / 2;
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(n, n), N(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      M(i, j) = normal(rng);
      N(i, j) = normal(rng);
    }
  Matrix E(d, d);
  E << M, N, -N, M;
  const double rho = spectral_abscissa(E);
  E -= (rho + abscissa_below) * Matrix::Identity(d, d);
  return E;
}

// One-variable helper: constraint c0 + y0 * c1 (scalar, 1x1).
AffineConstraint scalar_constraint(double c0, double c1, double margin) {
  AffineConstraint c;
  c.size = 1;
  c.constant = Matrix::Constant(1, 1, c0);
  c.coefficients[0] = Matrix::Constant(1, 1, c1);
  c.sense = ConstraintSense::Geq;
  c.margin = margin;
  return c;
}

}  // namespace

TEST_CASE("scalar counts per block kind") {
  VariableBlock sym{"S", BlockKind::Symmetric, 4, 4, 0};
  VariableBlock skw{"K", BlockKind::Skew, 4, 4, 0};
  VariableBlock ful{"F", BlockKind::Full, 2, 3, 0};
  CHECK(sym.scalar_count() == 10);
  CHECK(skw.scalar_count() == 6);
  CHECK(ful.scalar_count() == 6);
}

TEST_CASE("pack/unpack round-trips on random structured matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    VariableBlock sym{"S", BlockKind::Symmetric, 3, 3, 0};
    VariableBlock skw{"K", BlockKind::Skew, 4, 4, sym.scalar_count()};
    VariableBlock ful{"F", BlockKind::Full, 2, 3,
                      sym.scalar_count() + skw.scalar_count()};
    Vector y = Vector::Zero(ful.offset + ful.scalar_count());

    const Matrix S = random_symmetric(3, rng);
    const Matrix K = random_skew(4, rng);
    Matrix F(2, 3);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < 2; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) F(i, j) = normal(rng);

    sym.pack(S, y);
    skw.pack(K, y);
    ful.pack(F, y);
    CHECK((sym.unpack(y) - S).norm() == 0.0);
    CHECK((skw.unpack(y) - K).norm() == 0.0);
    CHECK((ful.unpack(y) - F).norm() == 0.0);
    // Structure is preserved by unpacking regardless of the scalar values.
    CHECK((sym.unpack(y) - sym.unpack(y).transpose()).norm() == 0.0);
    CHECK((skw.unpack(y) + skw.unpack(y).transpose()).norm() == 0.0);
  }
}

TEST_CASE("constraint_from_evaluator recovers an affine map exactly") {
  std::mt19937_64 rng(11);
  const Matrix F0 = random_symmetric(3, rng);
  const Matrix F1 = random_symmetric(3, rng);
  const Matrix F2 = random_symmetric(3, rng);
  auto eval = [&](const Vector& y) -> Matrix {
    return F0 + y(0) * F1 + y(2) * F2;
  };
  const AffineConstraint c = constraint_from_evaluator(
      3, 4, eval, {0, 2}, ConstraintSense::Leq, 1e-6);
  CHECK((c.constant - F0).norm() < 1e-12);
  REQUIRE(c.coefficients.count(0) == 1);
  REQUIRE(c.coefficients.count(2) == 1);
  CHECK(c.coefficients.count(1) == 0);
  CHECK((c.coefficients.at(0) - F1).norm() < 1e-12);
  CHECK((c.coefficients.at(2) - F2).norm() < 1e-12);
  // Emitted coefficients are exactly symmetric.
  for (const auto& [idx, Fi] : c.coefficients)
    CHECK((Fi - Fi.transpose()).norm() == 0.0);
}

TEST_CASE("canonical_value absorbs sense and margin") {
  AffineConstraint c = scalar_constraint(2.0, -1.0, 0.25);  // 2 - y >= 0.25
  Vector y = Vector::Constant(1, 1.0);
  CHECK(c.canonical_value(y)(0, 0) == doctest::Approx(2.0 - 1.0 - 0.25));
  c.sense = ConstraintSense::Leq;  // 2 - y <= -0.25  ->  -(2-y) - 0.25 >= 0
  CHECK(c.canonical_value(y)(0, 0) == doctest::Approx(-(2.0 - 1.0) - 0.25));
}

TEST_CASE("interval feasibility: y in [eps, 1-eps]") {
  SdpProblem prob;
  prob.margin = 1e-6;
  prob.blocks.push_back({"y", BlockKind::Full, 1, 1, 0});
  prob.constraints.push_back(scalar_constraint(0.0, 1.0, prob.margin));   // y >= eps
  prob.constraints.push_back(scalar_constraint(1.0, -1.0, prob.margin));  // 1-y >= eps
  const SdpOutcome out = check_feasible(prob);
  REQUIRE(out.status == SdpStatus::Feasible);
  REQUIRE(out.assignment.size() == 1);
  CHECK(out.assignment(0) >= prob.margin - 1e-9);
  CHECK(out.assignment(0) <= 1.0 - prob.margin + 1e-9);
  CHECK(verify_assignment(prob, out.assignment) >= -1e-9);
}

TEST_CASE("empty interval is infeasible") {
  SdpProblem prob;
  prob.margin = 1e-6;
  prob.blocks.push_back({"y", BlockKind::Full, 1, 1, 0});
  prob.constraints.push_back(scalar_constraint(0.0, 1.0, prob.margin));    // y >= eps
  prob.constraints.push_back(scalar_constraint(-1.0, -1.0, prob.margin));  // -1-y >= eps
  const SdpOutcome out = check_feasible(prob);
  CHECK(out.status == SdpStatus::Infeasible);
}

TEST_CASE("Lyapunov feasibility oracle on random Hurwitz embeddings") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    RealEmbedding aek{random_hurwitz(4, 0.2, rng)};
    const SdpProblem prob = assemble_lyap_check(aek, 0.0);
    const SdpOutcome out = check_feasible(prob);
    REQUIRE(out.status == SdpStatus::Feasible);
    // Independent re-verification of the returned certificate.
    CHECK(verify_assignment(prob, out.assignment) >= -1e-9);
  }
}

TEST_CASE("feasibility is monotone in mu for the Lyapunov check") {
  std::mt19937_64 rng(31);
  RealEmbedding aek{random_hurwitz(4, 1.0, rng)};
  const double rho = -spectral_abscissa(aek.Aek);
  // Feasible strictly inside the rate, infeasible strictly outside.
  const SdpOutcome inside = check_feasible(assemble_lyap_check(aek, 0.5 * rho));
  const SdpOutcome outside = check_feasible(assemble_lyap_check(aek, 1.5 * rho));
  CHECK(inside.status == SdpStatus::Feasible);
  CHECK(outside.status == SdpStatus::Infeasible);
  // Below a feasible mu everything stays feasible.
  const SdpOutcome lower = check_feasible(assemble_lyap_check(aek, 0.25 * rho));
  CHECK(lower.status == SdpStatus::Feasible);
}

TEST_CASE("determinism: identical problems produce identical outcomes") {
  std::mt19937_64 rng(41);
  RealEmbedding aek{random_hurwitz(4, 0.3, rng)};
  const SdpProblem prob = assemble_lyap_check(aek, 0.1);
  const SdpOutcome a = check_feasible(prob);
  const SdpOutcome b = check_feasible(prob);
  REQUIRE(a.status == b.status);
  REQUIRE(a.status == SdpStatus::Feasible);
  CHECK((a.assignment - b.assignment).norm() == 0.0);
}

TEST_CASE("warm start with a verified witness is accepted") {
  std::mt19937_64 rng(43);
  RealEmbedding aek{random_hurwitz(4, 0.5, rng)};
  const SdpProblem prob = assemble_lyap_check(aek, 0.1);
  const SdpOutcome cold = check_feasible(prob);
  REQUIRE(cold.status == SdpStatus::Feasible);
  const SdpOutcome warm = check_feasible(prob, {}, &cold.assignment);
  REQUIRE(warm.status == SdpStatus::Feasible);
  CHECK(verify_assignment(prob, warm.assignment) >= -1e-9);
}

TEST_CASE("injected fault: a perturbed assignment is rejected") {
  std::mt19937_64 rng(47);
  RealEmbedding aek{random_hurwitz(4, 0.2, rng)};
  const SdpProblem prob = assemble_lyap_check(aek, 0.0);
  const SdpOutcome out = check_feasible(prob);
  REQUIRE(out.status == SdpStatus::Feasible);
  Vector bad = out.assignment;
  bad *= -1.0;  // flips P_ek negative definite
  CHECK(verify_assignment(prob, bad) < 0.0);
}

TEST_CASE("sdp_to_json contains the block layout and constraint count") {
  SdpProblem prob;
  prob.margin = 1e-6;
  prob.blocks.push_back({"y", BlockKind::Full, 1, 1, 0});
  prob.constraints.push_back(scalar_constraint(0.0, 1.0, prob.margin));
  const std::string text = sdp_to_json(prob);
  CHECK(text.find("\"y\"") != std::string::npos);
  CHECK(text.find("constraints") != std::string::npos);
}
