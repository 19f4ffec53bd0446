#pragma once

#include <vector>

#include "sync/graph.hpp"

namespace synckit {

struct Trajectory {
  std::vector<double> times;
  std::vector<Vector> states;     // stacked x in R^{nN}
  std::vector<double> distances;  // |x(t)|_A
};

struct DecayFit {
  double overshoot = 0.0;  // fitted M
  double rate = 0.0;       // -slope of log-distance over the window
  double window_start = 0.0;
  double window_end = 0.0;
  double residual = 0.0;
};

/// Network vector field xdot = ((I_N (x) A) - (L (x) B K)) x, evaluated
/// blockwise without forming the nN x nN matrix.
Vector closed_loop_field(const Vector& x, const Plant& p, const Gain& k, const Laplacian& L);

/// Classical fixed-step RK4. Throws NonFiniteState on blow-up.
Trajectory integrate(const Vector& x0, const Plant& p, const Gain& k, const Laplacian& L,
                     double horizon, double step);

/// Euclidean distance to the synchronization (consensus) subspace.
double dist_to_sync(const Vector& x, Eigen::Index N, Eigen::Index n);

/// Least-squares exponential fit of the final window_fraction of the
/// distance trace; distances are floored at 1e-14 before taking logs.
DecayFit fit_decay(const Trajectory& traj, double window_fraction);

/// Standard-normal initial condition with the given seed (deterministic).
Vector random_initial_state(Eigen::Index dim, std::uint64_t seed);

/// CSV export with header "t,dist" (optionally per-agent state columns).
void trajectory_to_csv(const Trajectory& traj, const std::string& path,
                       bool with_states = false);

}  // namespace synckit
