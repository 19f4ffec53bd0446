#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sync/lmi.hpp"
#include "sync/verify.hpp"

namespace synckit {

struct AlgorithmConfig {
  double kappa_bar = 20.0;
  double tolerance = 1e-3;  // outer-loop guard on consecutive synthesis mu
  std::vector<double> alpha_grid = {0.01, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0};
  double mu_bisection_tol = 1e-4;
  double mu_cap = 0.0;  // 0 = derive from plant and spectrum norms
  int max_outer_iterations = 50;

  double effective_mu_cap(const Plant& p, const SpectrumSlice& s) const;
  void validate() const;
};

enum class SynthStatus { Ok, Infeasible, Degraded };

struct SynthesisResult {
  SynthStatus status = SynthStatus::Infeasible;
  Gain gain;
  double mu_star = 0.0;
  std::vector<std::pair<std::string, double>> mu_trace;  // (step-kind, mu)
  Certificate certificates;
  MultiplierSet multipliers;
  int iterations = 0;
  double wall_time = 0.0;
  std::string method;
};

/// Feasibility predicate over mu: a witness assignment when feasible,
/// nullopt when infeasible; may throw SolverFailure.
using MuPredicate = std::function<std::optional<Vector>(double)>;

struct BisectOutcome {
  bool feasible = false;
  double mu = 0.0;
  Vector witness;
};

/// Bisection on a monotone (feasible-below / infeasible-above) predicate.
/// lo_hint, when positive and feasible, shortcuts the lower bracket.
BisectOutcome bisect_mu(const MuPredicate& pred, double cap, double tol,
                        double lo_hint = 0.0);

struct SynthesisStep {
  bool feasible = false;
  bool solver_trouble = false;  // some probe failed and was treated as infeasible
  double mu = 0.0;
  SynthesisVars vars;
};

struct AnalysisStep {
  bool feasible = false;
  bool solver_trouble = false;
  double mu = 0.0;
  AnalysisVars vars;
};

/// Synthesis half-step: bisection-maximal mu with multipliers frozen.
SynthesisStep synthesis_step(const Plant& p, const SpectrumSlice& s,
                             const MultiplierSet& m, const AlgorithmConfig& cfg,
                             double lo_hint = 0.0);

/// Analysis half-step with (X, Y) frozen. Decouples per eigenvalue, so each
/// mode is bisected independently and the certified mu is the minimum.
AnalysisStep analysis_step(const Plant& p, const SpectrumSlice& s, const Matrix& X,
                           const Matrix& Y, const AlgorithmConfig& cfg,
                           double lo_hint = 0.0);

/// The full synthesis/analysis alternation, initialized from the best
/// scaled-identity multipliers over the alpha grid.
SynthesisResult algorithm1(const Plant& p, const WeightedDigraph& g,
                           const AlgorithmConfig& cfg = {});

/// One synthesis step per grid alpha, best mu kept.
SynthesisResult direct_design(const Plant& p, const WeightedDigraph& g,
                              const AlgorithmConfig& cfg = {});

/// Infinite-gain-margin baseline K = B'P with the Riccati parameter pushed
/// to the gain-norm bound.
SynthesisResult riccati_design(const Plant& p, const SpectrumSlice& s,
                               const AlgorithmConfig& cfg = {});

/// Common-Q conditions at the corners of the bounding box of the spectrum.
SynthesisResult listmann_design(const Plant& p, const SpectrumSlice& s,
                                const AlgorithmConfig& cfg = {});

/// Common-Q conditions at each spectrum eigenvalue.
SynthesisResult aek_design(const Plant& p, const SpectrumSlice& s,
                           const AlgorithmConfig& cfg = {});

}  // namespace synckit
