#pragma once

#include <vector>

#include "sync/graph.hpp"
#include "sync/lmi.hpp"

namespace synckit {

struct RateEstimate {
  double mu_hat = 0.0;
  std::size_t worst_k = 0;
  std::vector<double> per_mode_abscissas;
};

/// mu_hat = -max_k max Re(eig(A_k)), the spectral estimate of the
/// achieved synchronization rate.
RateEstimate estimate_rate(const Plant& p, const SpectrumSlice& s, const Gain& k);

enum class UgesMethod { Spectral, Lyapunov };

/// True iff the synchronization set is mu-UGES under gain k: either every
/// real-embedded mode has spectral abscissa below -mu, or the per-mode
/// Lyapunov inequality is feasible. The two agree away from the boundary.
bool check_mu_uges(const Plant& p, const SpectrumSlice& s, const Gain& k, double mu,
                   UgesMethod method);

}  // namespace synckit
