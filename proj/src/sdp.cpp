#include "sync/sdp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>

namespace synckit {

Eigen::Index VariableBlock::scalar_count() const {
  switch (kind) {
    case BlockKind::Symmetric:
      return rows * (rows + 1) / 2;
    case BlockKind::Skew:
      return rows * (rows - 1) / 2;
    case BlockKind::Full:
      return rows * cols;
  }
  return 0;
}

Matrix VariableBlock::unpack(const Vector& y) const {
  Matrix M = Matrix::Zero(rows, cols);
  Eigen::Index idx = offset;
  switch (kind) {
    case BlockKind::Symmetric:
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = i; j < cols; ++j) {
          M(i, j) = y(idx);
          M(j, i) = y(idx);
          ++idx;
        }
      break;
    case BlockKind::Skew:
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = i + 1; j < cols; ++j) {
          M(i, j) = y(idx);
          M(j, i) = -y(idx);
          ++idx;
        }
      break;
    case BlockKind::Full:
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = y(idx++);
      break;
  }
  return M;
}

void VariableBlock::pack(const Matrix& M, Vector& y) const {
  if (M.rows() != rows || M.cols() != cols)
    throw DimensionMismatch("VariableBlock::pack: shape mismatch for " + name);
  Eigen::Index idx = offset;
  switch (kind) {
    case BlockKind::Symmetric:
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = i; j < cols; ++j) y(idx++) = M(i, j);
      break;
    case BlockKind::Skew:
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = i + 1; j < cols; ++j) y(idx++) = M(i, j);
      break;
    case BlockKind::Full:
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) y(idx++) = M(i, j);
      break;
  }
}

Matrix AffineConstraint::canonical_value(const Vector& y) const {
  Matrix V = constant;
  for (const auto& [i, F] : coefficients) V += y(i) * F;
  if (sense == ConstraintSense::Leq) V = -V;
  V.diagonal().array() -= margin;
  return V;
}

Eigen::Index SdpProblem::total_scalars() const {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total = std::max(total, b.offset + b.scalar_count());
  return total;
}

const VariableBlock& SdpProblem::block(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return b;
  throw std::invalid_argument("SdpProblem: no block named " + name);
}

bool SdpProblem::has_block(const std::string& name) const {
  for (const auto& b : blocks)
    if (b.name == name) return true;
  return false;
}

AffineConstraint constraint_from_evaluator(
    Eigen::Index size, Eigen::Index n_scalars,
    const std::function<Matrix(const Vector&)>& eval,
    const std::vector<Eigen::Index>& active_vars, ConstraintSense sense,
    double margin) {
  auto symmetrize = [](const Matrix& M) { return Matrix(0.5 * (M + M.transpose())); };
  AffineConstraint c;
  c.size = size;
  c.sense = sense;
  c.margin = margin;
  Vector y = Vector::Zero(n_scalars);
  const Matrix F0_raw = eval(y);
  if (F0_raw.rows() != size || F0_raw.cols() != size)
    throw DimensionMismatch("constraint_from_evaluator: evaluator size mismatch");
  c.constant = symmetrize(F0_raw);
  for (Eigen::Index i : active_vars) {
    y(i) = 1.0;
    Matrix Fi = symmetrize(eval(y) - F0_raw);
    y(i) = 0.0;
    if (!Fi.isZero(0.0)) c.coefficients.emplace(i, std::move(Fi));
  }
  return c;
}

double verify_assignment(const SdpProblem& prob, const Vector& y) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : prob.constraints) {
    const Matrix V = c.canonical_value(y);
    const double lam = Eigen::SelfAdjointEigenSolver<Matrix>(V, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff();
    worst = std::min(worst, lam / (1.0 + c.constant.norm()));
  }
  return worst;
}

namespace {

// Canonical ">= 0" block for the barrier solver; the phase-I slack variable
// (index m) enters the original constraints with coefficient -I.
struct CanonBlock {
  Matrix F0;
  std::vector<Eigen::Index> vars;
  std::vector<Matrix> coeffs;
};

Matrix block_value(const CanonBlock& b, const Vector& v) {
  Matrix S = b.F0;
  for (std::size_t i = 0; i < b.vars.size(); ++i) S += v(b.vars[i]) * b.coeffs[i];
  return S;
}

// Returns false if any block leaves the cone.
bool barrier_eval(const std::vector<CanonBlock>& blocks, const Vector& v, double* logdet_sum) {
  double total = 0.0;
  for (const auto& b : blocks) {
    Eigen::LLT<Matrix> llt(block_value(b, v));
    if (llt.info() != Eigen::Success) return false;
    total += 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  }
  *logdet_sum = total;
  return true;
}

}  // namespace

SdpOutcome check_feasible(const SdpProblem& prob, const SdpSettings& settings,
                          const Vector* warm_start) {
  const Eigen::Index m = prob.total_scalars();
  const Eigen::Index nv = m + 1;  // + phase-I slack t
  const Eigen::Index t_idx = m;

  std::vector<CanonBlock> blocks;
  double nu_total = 0.0;  // barrier parameter

  for (const auto& c : prob.constraints) {
    CanonBlock b;
    b.F0 = c.constant;
    if (c.sense == ConstraintSense::Leq) b.F0 = -b.F0;
    b.F0.diagonal().array() -= c.margin;
    const double sign = c.sense == ConstraintSense::Leq ? -1.0 : 1.0;
    // Normalize mixed-scale constraints; scaling a cone constraint by a
    // positive factor leaves the feasible set unchanged and conditions the
    // Newton system.
    double scale = std::max(b.F0.norm(), 1e-12);
    for (const auto& [i, F] : c.coefficients) scale = std::max(scale, F.norm());
    b.F0 /= scale;
    for (const auto& [i, F] : c.coefficients) {
      b.vars.push_back(i);
      b.coeffs.push_back((sign / scale) * F);
    }
    b.vars.push_back(t_idx);
    b.coeffs.push_back(-Matrix::Identity(c.size, c.size));
    nu_total += static_cast<double>(c.size);
    blocks.push_back(std::move(b));
  }
  // Box |y_i| <= box_bound and slack cap t <= slack_cap keep the phase-I
  // problem bounded despite the homogeneity of the LMIs.
  for (Eigen::Index i = 0; i < m; ++i) {
    for (double sign : {1.0, -1.0}) {
      CanonBlock b;
      b.F0 = Matrix::Constant(1, 1, settings.box_bound);
      b.vars = {i};
      b.coeffs = {Matrix::Constant(1, 1, sign)};
      blocks.push_back(std::move(b));
      nu_total += 1.0;
    }
  }
  {
    CanonBlock b;
    b.F0 = Matrix::Constant(1, 1, settings.slack_cap);
    b.vars = {t_idx};
    b.coeffs = {Matrix::Constant(1, 1, -1.0)};
    blocks.push_back(std::move(b));
    nu_total += 1.0;
  }

  // Strictly feasible start: t strictly below the smallest eigenvalue of
  // the slack-carrying blocks at the seed point (the origin, or a witness
  // from a nearby problem when provided).
  Vector v = Vector::Zero(nv);
  if (warm_start && warm_start->size() == m &&
      warm_start->allFinite() &&
      warm_start->cwiseAbs().maxCoeff() < 0.99 * settings.box_bound)
    v.head(m) = *warm_start;
  double t0 = 0.0;
  for (std::size_t j = 0; j < prob.constraints.size(); ++j) {
    Matrix G = blocks[j].F0;
    for (std::size_t i = 0; i + 1 < blocks[j].vars.size(); ++i)
      G += v(blocks[j].vars[i]) * blocks[j].coeffs[i];
    const double lam =
        Eigen::SelfAdjointEigenSolver<Matrix>(G, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .minCoeff();
    t0 = std::min(t0, lam);
  }
  if (t0 > settings.feasible_stop) {
    // The seed is already strictly feasible.
    SdpOutcome seeded;
    seeded.assignment = v.head(m);
    const double slack = verify_assignment(prob, seeded.assignment);
    if (slack >= -1e-9) {
      seeded.status = SdpStatus::Feasible;
      return seeded;
    }
  }
  v(t_idx) = std::min(t0 - 0.05 * (1.0 + std::abs(t0)), 0.5 * settings.slack_cap);

  auto finish_feasible = [&](const Vector& vv) -> SdpOutcome {
    SdpOutcome out;
    out.assignment = vv.head(m);
    const double slack = verify_assignment(prob, out.assignment);
    out.max_violation = std::max(0.0, -slack);
    if (slack >= -1e-9) {
      out.status = SdpStatus::Feasible;
    } else {
      out.status = SdpStatus::SolverFailure;
      out.diagnostics = "claimed-feasible point failed independent verification";
    }
    return out;
  };

  // With tau far below the barrier parameter the first center drifts to
  // deeply negative slack and later stages pay to climb back; start with
  // the objective and barrier balanced instead.
  double tau = std::max(settings.tau0, nu_total);
  bool stalled = false;
  bool stage_centered = false;
  std::string stall_reason;

  const bool debug = std::getenv("SYNC_SDP_DEBUG") != nullptr;
  int total_newton = 0;
  int n_stages = 0;

  while (true) {
    // Newton centering at fixed tau.
    int iters = 0;
    double decrement = std::numeric_limits<double>::infinity();
    stage_centered = false;
    for (; iters < settings.max_newton_per_stage; ++iters) {
      Vector grad = Vector::Zero(nv);
      grad(t_idx) = -tau;
      Matrix H = Matrix::Zero(nv, nv);

      bool cone_ok = true;
      for (const auto& b : blocks) {
        Eigen::LLT<Matrix> llt(block_value(b, v));
        if (llt.info() != Eigen::Success) {
          cone_ok = false;
          break;
        }
        const Eigen::Index s = b.F0.rows();
        const Matrix Sinv = llt.solve(Matrix::Identity(s, s));
        const std::size_t na = b.vars.size();
        std::vector<Matrix> M(na);
        for (std::size_t i = 0; i < na; ++i) {
          M[i] = Sinv * b.coeffs[i];
          grad(b.vars[i]) -= M[i].trace();
        }
        for (std::size_t i = 0; i < na; ++i)
          for (std::size_t k = i; k < na; ++k) {
            const double h = (M[i].array() * M[k].transpose().array()).sum();
            H(b.vars[i], b.vars[k]) += h;
            if (k != i) H(b.vars[k], b.vars[i]) += h;
          }
      }
      if (!cone_ok) {
        stalled = true;
        stall_reason = "iterate left the cone";
        break;
      }

      Eigen::LDLT<Matrix> ldlt(H);
      Vector d = ldlt.solve(-grad);
      if (!d.allFinite() || ldlt.info() != Eigen::Success) {
        H.diagonal().array() += 1e-12 * (1.0 + H.diagonal().maxCoeff());
        d = H.ldlt().solve(-grad);
        if (!d.allFinite()) {
          stalled = true;
          stall_reason = "singular Newton system";
          break;
        }
      }
      decrement = -grad.dot(d);
      // Newton decrement lambda^2 <= 1/16 puts the iterate close enough to
      // the central path for the (safety-factored) duality bound.
      if (decrement < 0.0625) {
        stage_centered = true;
        break;
      }

      double f0;
      if (!barrier_eval(blocks, v, &f0)) {
        stalled = true;
        stall_reason = "iterate left the cone";
        break;
      }
      f0 = -tau * v(t_idx) - f0;
      // Damped Newton step for self-concordant barriers guarantees progress
      // even far from the central path; backtracking refines it.
      const double lambda = std::sqrt(std::max(0.0, decrement));
      double alpha = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
      bool accepted = false;
      double best_f = f0;
      while (alpha > 1e-13) {
        Vector vt = v + alpha * d;
        double ld;
        if (barrier_eval(blocks, vt, &ld)) {
          const double ft = -tau * vt(t_idx) - ld;
          if (ft <= f0 - 0.01 * alpha * decrement) {
            best_f = ft;
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!accepted) break;  // no further progress at this tau
      // Extend the step while the objective keeps improving; the damped
      // step is very conservative far from the central path.
      while (alpha < 0.5) {
        Vector vt = v + 2.0 * alpha * d;
        double ld;
        if (!barrier_eval(blocks, vt, &ld)) break;
        const double ft = -tau * vt(t_idx) - ld;
        if (ft > best_f - 0.01 * alpha * decrement) break;
        best_f = ft;
        alpha *= 2.0;
      }
      v += alpha * d;
      if (v(t_idx) > settings.feasible_stop) return finish_feasible(v);
    }
    total_newton += iters;
    ++n_stages;
    if (debug)
      std::fprintf(stderr,
                   "[sdp] m=%lld stage=%d tau=%.3g iters=%d dec=%.3g t=%.6g\n",
                   static_cast<long long>(m), n_stages, tau, iters, decrement,
                   v(t_idx));
    if (stalled) break;
    if (v(t_idx) > settings.feasible_stop) return finish_feasible(v);

    // The duality bound max t <= t(v) + nu/tau is only valid at (near) the
    // analytic center of the tau-subproblem; never declare infeasibility
    // from an uncentered iterate.
    const double gap = nu_total / tau;
    if (stage_centered && v(t_idx) + 2.0 * gap < 0.0) {
      SdpOutcome out;
      out.status = SdpStatus::Infeasible;
      out.max_violation = -v(t_idx);
      return out;
    }
    if (gap < settings.gap_tol) break;
    tau *= settings.tau_factor;
  }

  if (!stalled) {
    // Optimal slack resolved to gap_tol; classify by sign.
    if (v(t_idx) > 0.0) return finish_feasible(v);
    SdpOutcome probe = finish_feasible(v);
    if (probe.status == SdpStatus::Feasible) return probe;  // within -1e-9 band
    SdpOutcome out;
    if (stage_centered) {
      out.status = SdpStatus::Infeasible;
      out.max_violation = -v(t_idx);
    } else {
      out.status = SdpStatus::SolverFailure;
      out.diagnostics = "slack nonpositive but final stage did not center";
    }
    return out;
  }

  SdpOutcome out;
  out.status = SdpStatus::SolverFailure;
  out.diagnostics = "barrier solver stalled: " + stall_reason;
  // A stalled run may still have crossed into feasibility.
  if (v(t_idx) > 0.0) {
    SdpOutcome probe = finish_feasible(v);
    if (probe.status == SdpStatus::Feasible) return probe;
  }
  return out;
}

std::string sdp_to_json(const SdpProblem& prob) {
  nlohmann::json j;
  j["margin"] = prob.margin;
  j["n_scalars"] = prob.total_scalars();
  auto jb = nlohmann::json::array();
  for (const auto& b : prob.blocks) {
    const char* kind = b.kind == BlockKind::Symmetric ? "symmetric"
                       : b.kind == BlockKind::Skew    ? "skew"
                                                      : "full";
    jb.push_back({{"name", b.name},
                  {"kind", kind},
                  {"rows", b.rows},
                  {"cols", b.cols},
                  {"offset", b.offset},
                  {"scalars", b.scalar_count()}});
  }
  j["blocks"] = std::move(jb);
  auto dense = [](const Matrix& M) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      auto row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(M(i, k));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  auto jc = nlohmann::json::array();
  for (const auto& c : prob.constraints) {
    nlohmann::json entry;
    entry["size"] = c.size;
    entry["sense"] = c.sense == ConstraintSense::Geq ? ">=" : "<=";
    entry["margin"] = c.margin;
    entry["constant"] = dense(c.constant);
    auto coeffs = nlohmann::json::array();
    for (const auto& [i, F] : c.coefficients)
      coeffs.push_back({{"var", i}, {"matrix", dense(F)}});
    entry["coefficients"] = std::move(coeffs);
    jc.push_back(std::move(entry));
  }
  j["constraints"] = std::move(jc);
  return j.dump();
}

}  // namespace synckit
