#include "sync/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace synckit {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double max_abs_eigenvalue(const SpectrumSlice& s) {
  double m = 0.0;
  for (const Complex& l : s.eigenvalues) m = std::max(m, std::abs(l));
  return m;
}

Matrix gain_from(const Matrix& Y, const Matrix& X) {
  Eigen::FullPivLU<Matrix> lu(X);
  if (!lu.isInvertible())
    throw SolverFailure("gain extraction: X is singular");
  return Y * lu.inverse();
}

// Feasible outcomes are independently verified inside check_feasible, so a
// failed solve can safely be treated as an infeasible probe: the bisection
// keeps only verified lower bounds and the result just becomes conservative.
// The trouble flag records that this happened.
std::optional<Vector> probe_feasible(const SdpProblem& prob, bool* trouble,
                                     Vector* warm = nullptr) {
  const Vector* seed = warm && warm->size() > 0 ? warm : nullptr;
  SdpOutcome out = check_feasible(prob, {}, seed);
  if (out.status == SdpStatus::SolverFailure) {
    // One patient retry from scratch before conceding the probe.
    SdpSettings retry;
    retry.max_newton_per_stage = 1500;
    out = check_feasible(prob, retry);
  }
  if (out.status == SdpStatus::Feasible) {
    if (warm) *warm = out.assignment;
    return out.assignment;
  }
  if (out.status == SdpStatus::SolverFailure && trouble) *trouble = true;
  return std::nullopt;
}

}  // namespace

double AlgorithmConfig::effective_mu_cap(const Plant& p, const SpectrumSlice& s) const {
  if (mu_cap > 0.0) return mu_cap;
  const double nA = matrix_2norm(p.A);
  const double nB = matrix_2norm(p.B);
  return kappa_bar * (nA + max_abs_eigenvalue(s) * nB) + nA;
}

void AlgorithmConfig::validate() const {
  if (kappa_bar <= 0.0 || tolerance <= 0.0 || mu_bisection_tol <= 0.0 ||
      max_outer_iterations <= 0 || alpha_grid.empty())
    throw std::invalid_argument("AlgorithmConfig: all parameters must be positive");
  if (tolerance <= mu_bisection_tol)
    throw std::invalid_argument(
        "AlgorithmConfig: tolerance must exceed the mu bisection tolerance");
  for (double a : alpha_grid)
    if (a <= 0.0) throw std::invalid_argument("AlgorithmConfig: alpha grid must be positive");
}

BisectOutcome bisect_mu(const MuPredicate& pred, double cap, double tol, double lo_hint) {
  BisectOutcome out;

  double lo = -1.0;
  Vector lo_witness;
  if (lo_hint > 0.0 && lo_hint < cap) {
    if (auto w = pred(lo_hint)) {
      lo = lo_hint;
      lo_witness = std::move(*w);
    }
  }
  if (lo < 0.0) {
    auto w = pred(0.0);
    if (!w) return out;  // infeasible sentinel
    lo = 0.0;
    lo_witness = std::move(*w);
  }

  // Expand the upper bracket before bisecting; start gently so probes stay
  // on the (cheaper, warm-startable) feasible side.
  double hi = cap;
  double step = std::max(8.0 * tol, 0.125 * lo);
  bool hi_infeasible = false;
  while (lo + step < cap) {
    const double probe = lo + step;
    if (auto w = pred(probe)) {
      lo = probe;
      lo_witness = std::move(*w);
      step *= 4.0;
    } else {
      hi = probe;
      hi_infeasible = true;
      break;
    }
  }
  if (!hi_infeasible) {
    if (auto w = pred(cap)) {
      out.feasible = true;
      out.mu = cap;
      out.witness = std::move(*w);
      return out;
    }
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (auto w = pred(mid)) {
      lo = mid;
      lo_witness = std::move(*w);
    } else {
      hi = mid;
    }
  }
  out.feasible = true;
  out.mu = lo;
  out.witness = std::move(lo_witness);
  return out;
}

SynthesisStep synthesis_step(const Plant& p, const SpectrumSlice& s,
                             const MultiplierSet& m, const AlgorithmConfig& cfg,
                             double lo_hint) {
  const double cap = cfg.effective_mu_cap(p, s);
  SynthesisStep step;
  Vector warm;
  auto pred = [&](double mu) {
    return probe_feasible(assemble_synthesis(p, s, m, mu, cfg.kappa_bar),
                          &step.solver_trouble, &warm);
  };
  const BisectOutcome b = bisect_mu(pred, cap, cfg.mu_bisection_tol, lo_hint);
  if (!b.feasible) return step;
  step.feasible = true;
  step.mu = b.mu;
  step.vars = extract_synthesis(assemble_synthesis(p, s, m, b.mu, cfg.kappa_bar),
                                b.witness, s.nu());
  return step;
}

AnalysisStep analysis_step(const Plant& p, const SpectrumSlice& s, const Matrix& X,
                           const Matrix& Y, const AlgorithmConfig& cfg, double lo_hint) {
  const double cap = cfg.effective_mu_cap(p, s);
  const Gain k{gain_from(Y, X)};

  AnalysisStep step;
  step.feasible = true;
  step.mu = std::numeric_limits<double>::infinity();

  // Certificates cannot beat the spectral rate of a mode, so each abscissa
  // bounds that mode's bisection from above. Processing modes by ascending
  // spectral rate lets non-binding modes exit after a single probe: the
  // structured inequality is monotone in mu, so a witness at the running
  // minimum also certifies any smaller rate.
  std::vector<std::size_t> order(s.nu());
  std::vector<double> mu_hat(s.nu());
  for (std::size_t i = 0; i < s.nu(); ++i) {
    order[i] = i;
    mu_hat[i] = -spectral_abscissa(real_embedding(p, k, s.eigenvalues[i]).Aek);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return mu_hat[a] < mu_hat[b]; });

  std::vector<Matrix> Z(s.nu()), W(s.nu()), Q(s.nu()), Sg(s.nu());
  for (std::size_t idx = 0; idx < s.nu(); ++idx) {
    const std::size_t i = order[idx];
    SpectrumSlice mode;
    mode.eigenvalues = {s.eigenvalues[i]};
    mode.dedup_tolerance = s.dedup_tolerance;

    const double cap_k = std::min(cap, std::max(0.0, mu_hat[i]) + cfg.mu_bisection_tol);

    Vector warm;
    auto pred = [&](double mu) {
      return probe_feasible(assemble_analysis(p, mode, X, Y, mu, cfg.kappa_bar),
                            &step.solver_trouble, &warm);
    };

    double mu_k;
    Vector witness;
    const double running = std::min(step.mu, cap_k);
    if (idx > 0 && std::isfinite(step.mu) && running < cap_k + cfg.mu_bisection_tol) {
      if (auto w = pred(running)) {
        // Mode cannot lower the minimum; keep the witness at the running rate.
        mu_k = running;
        witness = std::move(*w);
      } else {
        const BisectOutcome b =
            bisect_mu(pred, running, cfg.mu_bisection_tol, 0.0);
        if (!b.feasible) {
          step.feasible = false;
          step.mu = 0.0;
          return step;
        }
        mu_k = b.mu;
        witness = b.witness;
      }
    } else {
      const BisectOutcome b = bisect_mu(pred, cap_k, cfg.mu_bisection_tol,
                                        std::min(lo_hint, cap_k));
      if (!b.feasible) {
        step.feasible = false;
        step.mu = 0.0;
        return step;
      }
      mu_k = b.mu;
      witness = b.witness;
    }
    step.mu = std::min(step.mu, mu_k);
    const AnalysisVars v = extract_analysis(
        assemble_analysis(p, mode, X, Y, mu_k, cfg.kappa_bar), witness, 1);
    Z[i] = v.multipliers.Z[0];
    W[i] = v.multipliers.W[0];
    Q[i] = v.cert.Q[0];
    Sg[i] = v.cert.Sigma[0];
  }
  step.vars.multipliers.Z = std::move(Z);
  step.vars.multipliers.W = std::move(W);
  step.vars.cert.Q = std::move(Q);
  step.vars.cert.Sigma = std::move(Sg);
  return step;
}

namespace {

struct GridInit {
  bool feasible = false;
  double alpha = 0.0;
  SynthesisStep step;
  MultiplierSet multipliers;
};

// Best scaled-identity initialization over the alpha grid; ties within the
// bisection tolerance go to the smallest alpha.
GridInit grid_initialize(const Plant& p, const SpectrumSlice& s,
                         const AlgorithmConfig& cfg) {
  std::vector<double> grid = cfg.alpha_grid;
  std::sort(grid.begin(), grid.end());
  GridInit best;
  for (double alpha : grid) {
    MultiplierSet m = MultiplierSet::scaled_identity(s.nu(), 2 * p.n(), alpha);
    const SynthesisStep step = synthesis_step(p, s, m, cfg);
    if (!step.feasible) continue;
    if (!best.feasible || step.mu > best.step.mu + cfg.mu_bisection_tol) {
      best.feasible = true;
      best.alpha = alpha;
      best.step = step;
      best.multipliers = std::move(m);
    }
  }
  return best;
}

SynthesisResult finish(SynthesisResult r, const Stopwatch& watch) {
  r.wall_time = watch.seconds();
  return r;
}

}  // namespace

SynthesisResult algorithm1(const Plant& p, const WeightedDigraph& g,
                           const AlgorithmConfig& cfg) {
  cfg.validate();
  const Stopwatch watch;
  const SpectrumSlice s = nonzero_spectrum(laplacian(g));

  SynthesisResult r;
  r.method = "alg1";

  GridInit init = grid_initialize(p, s, cfg);
  if (!init.feasible) {
    r.status = SynthStatus::Infeasible;
    return finish(std::move(r), watch);
  }

  double mu_s = init.step.mu;
  SynthesisVars vars = init.step.vars;
  MultiplierSet multipliers = init.multipliers;
  r.mu_trace.emplace_back("synthesis", mu_s);
  r.iterations = 1;
  r.mu_star = mu_s;
  r.certificates = vars.cert;

  bool trouble = init.step.solver_trouble;
  double mu_prev = -std::numeric_limits<double>::infinity();
  while (std::abs(mu_prev - mu_s) > cfg.tolerance &&
         r.iterations < cfg.max_outer_iterations) {
    const AnalysisStep an = analysis_step(p, s, vars.X, vars.Y, cfg, mu_s);
    trouble = trouble || an.solver_trouble;
    if (!an.feasible) break;  // solver wobble; keep the certified state
    r.mu_trace.emplace_back("analysis", an.mu);
    multipliers = an.vars.multipliers;
    r.certificates = an.vars.cert;
    // The analysis certificate refers to the current (X, Y), so it can only
    // raise the certified rate of the gain we would return right now.
    r.mu_star = std::max(r.mu_star, an.mu);

    mu_prev = mu_s;
    const SynthesisStep sy = synthesis_step(p, s, multipliers, cfg, an.mu);
    trouble = trouble || sy.solver_trouble;
    if (!sy.feasible) break;
    mu_s = sy.mu;
    vars = sy.vars;
    r.mu_trace.emplace_back("synthesis", mu_s);
    // New (X, Y): previous certificates no longer describe the returned
    // gain, so the certified rate is reset, not maxed.
    r.mu_star = mu_s;
    r.certificates = vars.cert;
    ++r.iterations;
  }
  r.status = trouble ? SynthStatus::Degraded : SynthStatus::Ok;

  r.gain.K = gain_from(vars.Y, vars.X);
  r.multipliers = std::move(multipliers);
  return finish(std::move(r), watch);
}

SynthesisResult direct_design(const Plant& p, const WeightedDigraph& g,
                              const AlgorithmConfig& cfg) {
  cfg.validate();
  const Stopwatch watch;
  const SpectrumSlice s = nonzero_spectrum(laplacian(g));

  SynthesisResult r;
  r.method = "direct";
  const GridInit init = grid_initialize(p, s, cfg);
  if (!init.feasible) {
    r.status = SynthStatus::Infeasible;
    return finish(std::move(r), watch);
  }
  r.status = init.step.solver_trouble ? SynthStatus::Degraded : SynthStatus::Ok;
  r.mu_star = init.step.mu;
  r.mu_trace.emplace_back("synthesis", init.step.mu);
  r.gain.K = gain_from(init.step.vars.Y, init.step.vars.X);
  r.certificates = init.step.vars.cert;
  r.multipliers = init.multipliers;
  r.iterations = 1;
  return finish(std::move(r), watch);
}

SynthesisResult riccati_design(const Plant& p, const SpectrumSlice& s,
                               const AlgorithmConfig& cfg) {
  cfg.validate();
  if (s.nu() == 0) throw std::invalid_argument("riccati_design: empty spectrum");
  const Stopwatch watch;

  double b = std::numeric_limits<double>::infinity();
  for (const Complex& l : s.eigenvalues) b = std::min(b, l.real());

  auto gain_at = [&](double a) { return Matrix(p.B.transpose() * solve_care(p, a, b)); };

  // ||K(a)|| is nondecreasing in a; push a to the norm bound.
  double a_lo = 1.0;
  while (matrix_2norm(gain_at(a_lo)) > cfg.kappa_bar) {
    a_lo *= 0.5;
    if (a_lo < 1e-12)
      throw NoStabilizingSolution("riccati_design: norm bound unreachable");
  }
  double a_hi = a_lo;
  while (matrix_2norm(gain_at(a_hi)) <= cfg.kappa_bar) {
    a_hi *= 2.0;
    if (a_hi > 1e12) break;
  }
  while ((a_hi - a_lo) > 1e-6 * a_hi) {
    const double mid = 0.5 * (a_lo + a_hi);
    if (matrix_2norm(gain_at(mid)) <= cfg.kappa_bar)
      a_lo = mid;
    else
      a_hi = mid;
  }

  SynthesisResult r;
  r.method = "riccati";
  r.status = SynthStatus::Ok;
  r.gain.K = gain_at(a_lo);
  r.mu_star = std::max(0.0, estimate_rate(p, s, r.gain).mu_hat);
  r.mu_trace.emplace_back("riccati", r.mu_star);
  r.iterations = 1;
  return finish(std::move(r), watch);
}

namespace {

SynthesisResult common_q_design(const Plant& p, const SpectrumSlice& s,
                                const std::vector<Complex>& values,
                                const AlgorithmConfig& cfg, const std::string& method) {
  const Stopwatch watch;
  SynthesisResult r;
  r.method = method;

  const double cap = cfg.effective_mu_cap(p, s);
  bool trouble = false;
  Vector warm;
  auto pred = [&](double mu) {
    return probe_feasible(assemble_common_q(p, values, mu, cfg.kappa_bar), &trouble,
                          &warm);
  };
  const BisectOutcome b = bisect_mu(pred, cap, cfg.mu_bisection_tol);
  if (!b.feasible) {
    r.status = SynthStatus::Infeasible;
    return finish(std::move(r), watch);
  }

  const SdpProblem prob = assemble_common_q(p, values, b.mu, cfg.kappa_bar);
  const Matrix Q = prob.block("Q").unpack(b.witness);
  const Matrix Y = prob.block("Y").unpack(b.witness);
  r.status = trouble ? SynthStatus::Degraded : SynthStatus::Ok;
  r.gain.K = gain_from(Y, Q);
  r.mu_star = b.mu;
  r.mu_trace.emplace_back("bisection", b.mu);
  r.certificates.Q.push_back(Q);
  r.certificates.Sigma.push_back(Matrix::Zero(p.n(), p.n()));
  r.iterations = 1;
  return finish(std::move(r), watch);
}

}  // namespace

SynthesisResult listmann_design(const Plant& p, const SpectrumSlice& s,
                                const AlgorithmConfig& cfg) {
  cfg.validate();
  if (s.nu() == 0) throw std::invalid_argument("listmann_design: empty spectrum");

  double re_min = std::numeric_limits<double>::infinity(), re_max = -re_min;
  double im_max = 0.0;
  for (const Complex& l : s.eigenvalues) {
    re_min = std::min(re_min, l.real());
    re_max = std::max(re_max, l.real());
    im_max = std::max(im_max, l.imag());
  }
  std::vector<Complex> corners;
  for (double re : {re_min, re_max})
    for (double im : {0.0, im_max}) {
      const Complex c(re, im);
      bool dup = false;
      for (const Complex& k : corners)
        if (std::abs(k - c) <= s.dedup_tolerance) { dup = true; break; }
      if (!dup) corners.push_back(c);
    }
  return common_q_design(p, s, corners, cfg, "listmann");
}

SynthesisResult aek_design(const Plant& p, const SpectrumSlice& s,
                           const AlgorithmConfig& cfg) {
  cfg.validate();
  if (s.nu() == 0) throw std::invalid_argument("aek_design: empty spectrum");
  return common_q_design(p, s, s.eigenvalues, cfg, "aek");
}

}  // namespace synckit
