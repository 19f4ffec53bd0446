#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sync/linalg.hpp"

namespace synckit {

enum class BlockKind { Symmetric, Skew, Full };

/// One structured matrix variable mapped into the scalar decision vector.
/// Symmetric d x d stores the upper triangle row-major (d(d+1)/2 scalars),
/// skew d x d the strict upper triangle (d(d-1)/2), full r x c all entries
/// row-major.
struct VariableBlock {
  std::string name;
  BlockKind kind = BlockKind::Full;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  Eigen::Index offset = 0;

  Eigen::Index scalar_count() const;
  Matrix unpack(const Vector& y) const;
  void pack(const Matrix& M, Vector& y) const;
};

enum class ConstraintSense { Geq, Leq };  // >= margin*I  /  <= -margin*I

/// F0 + sum_i y_i F_i, compared against +-margin*I. All F_i exactly
/// symmetric.
struct AffineConstraint {
  Eigen::Index size = 0;
  Matrix constant;
  std::map<Eigen::Index, Matrix> coefficients;
  ConstraintSense sense = ConstraintSense::Geq;
  double margin = 0.0;

  /// Constraint value in canonical ">= 0" form (sense and margin absorbed).
  Matrix canonical_value(const Vector& y) const;
};

struct SdpProblem {
  std::vector<VariableBlock> blocks;
  std::vector<AffineConstraint> constraints;
  double margin = 0.0;

  Eigen::Index total_scalars() const;
  const VariableBlock& block(const std::string& name) const;
  bool has_block(const std::string& name) const;
};

enum class SdpStatus { Feasible, Infeasible, SolverFailure };

struct SdpOutcome {
  SdpStatus status = SdpStatus::SolverFailure;
  Vector assignment;      // present iff Feasible
  double max_violation = 0.0;
  std::string diagnostics;
};

struct SdpSettings {
  double box_bound = 1e6;     // |y_i| cap against homogeneous blow-up
  double slack_cap = 1.0;     // phase-I objective cap
  double gap_tol = 1e-9;      // resolution on the optimal slack
  double feasible_stop = 1e-8;  // early exit once the slack clears this
  double tau0 = 1.0;
  double tau_factor = 20.0;
  int max_newton_per_stage = 300;
};

/// Phase-I feasibility via a log-det barrier interior-point method.
/// Every Feasible outcome is re-verified with an independent eigenvalue
/// check before being returned. warm_start, when non-null and of the right
/// size, seeds the decision vector (e.g. with a witness from a nearby
/// problem).
SdpOutcome check_feasible(const SdpProblem& prob, const SdpSettings& settings = {},
                          const Vector* warm_start = nullptr);

/// Independent verification: smallest margin slack over all constraints at
/// the given assignment. Feasibility requires this to be >= -1e-9 * scale.
double verify_assignment(const SdpProblem& prob, const Vector& y);

/// Dense JSON debug dump of the problem (block layout + constraint data).
std::string sdp_to_json(const SdpProblem& prob);

/// Helper used by the assemblers: builds an AffineConstraint from an affine
/// matrix-valued evaluator by probing unit vectors; symmetrizes exactly.
AffineConstraint constraint_from_evaluator(
    Eigen::Index size, Eigen::Index n_scalars,
    const std::function<Matrix(const Vector&)>& eval,
    const std::vector<Eigen::Index>& active_vars, ConstraintSense sense,
    double margin);

}  // namespace synckit
