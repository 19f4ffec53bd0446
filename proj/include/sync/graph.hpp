#pragma once

#include <string>
#include <vector>

#include "sync/linalg.hpp"

namespace synckit {

/// Weighted directed communication graph. weights(i, j) >= 0 means agent i
/// uses the state of agent j in its control law.
struct WeightedDigraph {
  Matrix weights;  // N x N, nonnegative, zero diagonal

  explicit WeightedDigraph(Matrix w);

  Eigen::Index n_agents() const { return weights.rows(); }
};

struct Laplacian {
  Matrix L;
};

/// Distinct nonzero Laplacian eigenvalues, one representative per conjugate
/// pair (Im >= 0), sorted by nondecreasing real part, ties by |Im|.
struct SpectrumSlice {
  std::vector<Complex> eigenvalues;
  double dedup_tolerance = 1e-6;

  std::size_t nu() const { return eigenvalues.size(); }
};

inline constexpr double kDedupTolerance = 1e-6;

Laplacian laplacian(const WeightedDigraph& g);

SpectrumSlice nonzero_spectrum(const Laplacian& L, double dedup_tolerance = kDedupTolerance);

/// True iff some agent's state reaches every other agent along the
/// information-flow direction (j -> i when weights(i, j) > 0); equivalently
/// the zero Laplacian eigenvalue is simple.
bool is_connected(const WeightedDigraph& g);

/// Benchmark topologies: circ4, circ10, cpx5, cpx10, star10.
WeightedDigraph preset(const std::string& name, int n_agents = 0);

std::vector<std::string> preset_names();

/// JSON round-trip, schema {"n": N, "edges": [[i, j, w], ...]} with 1-based
/// agent indices.
std::string graph_to_json(const WeightedDigraph& g);
WeightedDigraph graph_from_json(const std::string& text);

}  // namespace synckit
