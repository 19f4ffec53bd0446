#pragma once

#include <vector>

#include "sync/graph.hpp"
#include "sync/sdp.hpp"

namespace synckit {

/// Per-mode Lyapunov certificate blocks. Q_ek = [[Q_k, S_k], [-S_k, Q_k]]
/// with Q_k symmetric positive definite and S_k skew-symmetric.
struct Certificate {
  std::vector<Matrix> Q;      // n x n symmetric
  std::vector<Matrix> Sigma;  // n x n skew

  Matrix Qe(std::size_t k) const;
  /// Smallest eigenvalue over all assembled Q_ek.
  double min_eigenvalue() const;
};

/// Frozen multipliers Z_k, W_k (2n x 2n) of the structured lifting.
struct MultiplierSet {
  std::vector<Matrix> Z;
  std::vector<Matrix> W;

  static MultiplierSet scaled_identity(std::size_t nu, Eigen::Index two_n, double alpha);
};

/// Uniform strictness margin converting strict inequalities to margin form.
double strictness_margin(const Matrix& A);

/// Synthesis-step problem: variables X, Y and per-mode Q_k, Sigma_k; the
/// structured bilinear inequality with Z_k, W_k frozen, Q_ek > 0, the gain
/// norm bound, and a trace cap per Q_k against homogeneous blow-up.
SdpProblem assemble_synthesis(const Plant& p, const SpectrumSlice& s,
                              const MultiplierSet& m, double mu, double kappa_bar);

/// Analysis-step problem: variables Z_k, W_k, Q_k, Sigma_k with X, Y frozen.
/// The norm bound involves only frozen data and is checked as a
/// precondition; throws FrozenGainViolatesNormBound when it fails.
SdpProblem assemble_analysis(const Plant& p, const SpectrumSlice& s, const Matrix& X,
                             const Matrix& Y, double mu, double kappa_bar);

/// Common-Q baseline: single symmetric Q and Y = K Q, one lifted constraint
/// per supplied eigenvalue, plus the norm bound in the form
/// [[2Q - I, Y'], [Y, kb^2 I]] >= 0, sound for K = Y Q^{-1}.
SdpProblem assemble_common_q(const Plant& p, const std::vector<Complex>& values,
                             double mu, double kappa_bar);

/// Mode-rate checker: P_ek = [[P_k, -Pi_k], [Pi_k, P_k]] > 0 with
/// He{P_ek A_ek} < -2 mu P_ek.
SdpProblem assemble_lyap_check(const RealEmbedding& aek, double mu);

struct SynthesisVars {
  Matrix X;
  Matrix Y;
  Certificate cert;
};

struct AnalysisVars {
  MultiplierSet multipliers;
  Certificate cert;
};

SynthesisVars extract_synthesis(const SdpProblem& prob, const Vector& y, std::size_t nu);
AnalysisVars extract_analysis(const SdpProblem& prob, const Vector& y, std::size_t nu);

}  // namespace synckit
