#include "sync/verify.hpp"

namespace synckit {

RateEstimate estimate_rate(const Plant& p, const SpectrumSlice& s, const Gain& k) {
  if (s.nu() == 0)
    throw std::invalid_argument("estimate_rate: empty spectrum");
  RateEstimate r;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.nu(); ++i) {
    const double a = spectral_abscissa(closed_loop_mode(p, k, s.eigenvalues[i]).Ak);
    r.per_mode_abscissas.push_back(a);
    if (a > worst) {
      worst = a;
      r.worst_k = i;
    }
  }
  r.mu_hat = -worst;
  return r;
}

bool check_mu_uges(const Plant& p, const SpectrumSlice& s, const Gain& k, double mu,
                   UgesMethod method) {
  if (mu < 0.0) throw std::invalid_argument("check_mu_uges: mu must be nonnegative");
  if (method == UgesMethod::Spectral) {
    for (const Complex& lambda : s.eigenvalues) {
      if (spectral_abscissa(real_embedding(p, k, lambda).Aek) >= -mu) return false;
    }
    return true;
  }
  for (const Complex& lambda : s.eigenvalues) {
    const SdpProblem prob = assemble_lyap_check(real_embedding(p, k, lambda), mu);
    const SdpOutcome out = check_feasible(prob);
    if (out.status == SdpStatus::SolverFailure)
      throw SolverFailure("check_mu_uges: " + out.diagnostics);
    if (out.status != SdpStatus::Feasible) return false;
  }
  return true;
}

}  // namespace synckit
