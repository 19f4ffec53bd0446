#include "sync/graph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <nlohmann/json.hpp>

namespace synckit {

WeightedDigraph::WeightedDigraph(Matrix w) : weights(std::move(w)) {
  if (weights.rows() != weights.cols())
    throw DimensionMismatch("WeightedDigraph: weight matrix must be square");
  if (weights.rows() < 2)
    throw std::invalid_argument("WeightedDigraph: at least two agents required");
  if (!weights.allFinite() || (weights.array() < 0.0).any())
    throw std::invalid_argument("WeightedDigraph: weights must be finite and nonnegative");
  if (weights.diagonal().cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("WeightedDigraph: diagonal must be zero");
}

Laplacian laplacian(const WeightedDigraph& g) {
  Matrix L = Matrix(g.weights.rowwise().sum().asDiagonal()) - g.weights;
  return Laplacian{std::move(L)};
}

SpectrumSlice nonzero_spectrum(const Laplacian& L, double dedup_tolerance) {
  if (dedup_tolerance <= 0.0)
    throw std::invalid_argument("nonzero_spectrum: dedup_tolerance must be positive");
  Eigen::EigenSolver<Matrix> es(L.L, /*computeEigenvectors=*/false);
  std::vector<Complex> eigs(es.eigenvalues().data(),
                            es.eigenvalues().data() + es.eigenvalues().size());

  int near_zero = 0;
  for (const Complex& e : eigs)
    if (std::abs(e) <= dedup_tolerance) ++near_zero;
  if (near_zero > 1)
    throw MultipleZeroEigenvalues(
        "nonzero_spectrum: multiple eigenvalues at zero, graph is not connected");

  // Conjugate pairs counted once: keep the Im >= 0 representative.
  std::vector<Complex> kept;
  for (const Complex& e : eigs) {
    if (std::abs(e) <= dedup_tolerance) continue;
    Complex rep = e.imag() < 0.0 ? std::conj(e) : e;
    bool dup = false;
    for (const Complex& k : kept)
      if (std::abs(k - rep) <= dedup_tolerance) { dup = true; break; }
    if (!dup) kept.push_back(rep);
  }
  std::sort(kept.begin(), kept.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return std::abs(a.imag()) < std::abs(b.imag());
  });
  return SpectrumSlice{std::move(kept), dedup_tolerance};
}

bool is_connected(const WeightedDigraph& g) {
  // Information flows j -> i when weights(i, j) > 0. Connected means some
  // root reaches every agent along that direction.
  const Eigen::Index N = g.n_agents();
  for (Eigen::Index root = 0; root < N; ++root) {
    std::vector<bool> seen(N, false);
    std::vector<Eigen::Index> stack{root};
    seen[root] = true;
    Eigen::Index count = 1;
    while (!stack.empty()) {
      Eigen::Index j = stack.back();
      stack.pop_back();
      for (Eigen::Index i = 0; i < N; ++i) {
        if (!seen[i] && g.weights(i, j) > 0.0) {
          seen[i] = true;
          ++count;
          stack.push_back(i);
        }
      }
    }
    if (count == N) return true;
  }
  return false;
}

namespace {

WeightedDigraph directed_cycle(int N) {
  Matrix W = Matrix::Zero(N, N);
  for (int i = 0; i < N; ++i) W(i, (i + N - 1) % N) = 1.0;  // i receives from i-1
  return WeightedDigraph(std::move(W));
}

}  // namespace

WeightedDigraph preset(const std::string& name, int n_agents) {
  auto check_n = [&](int canonical) {
    if (n_agents != 0 && n_agents != canonical)
      throw std::invalid_argument("preset " + name + " has fixed size " +
                                  std::to_string(canonical));
  };
  if (name == "circ4") {
    check_n(4);
    return directed_cycle(4);
  }
  if (name == "circ10") {
    check_n(10);
    return directed_cycle(10);
  }
  if (name == "cpx5") {
    // Directed 5-cycle plus the chord 1 -> 3 (agent 3 receives from agent 1).
    check_n(5);
    WeightedDigraph g = directed_cycle(5);
    g.weights(2, 0) = 1.0;
    return g;
  }
  if (name == "cpx10") {
    // Directed 10-cycle plus chords 1 -> 4 and 6 -> 9.
    check_n(10);
    WeightedDigraph g = directed_cycle(10);
    g.weights(3, 0) = 1.0;
    g.weights(8, 5) = 1.0;
    return g;
  }
  if (name == "star10") {
    // Bidirectional star, hub = agent 1.
    check_n(10);
    Matrix W = Matrix::Zero(10, 10);
    for (int leaf = 1; leaf < 10; ++leaf) {
      W(0, leaf) = 1.0;
      W(leaf, 0) = 1.0;
    }
    return WeightedDigraph(std::move(W));
  }
  throw UnknownPreset("unknown graph preset: " + name);
}

std::vector<std::string> preset_names() {
  return {"circ4", "circ10", "cpx5", "cpx10", "star10"};
}

std::string graph_to_json(const WeightedDigraph& g) {
  nlohmann::json j;
  j["n"] = g.n_agents();
  auto edges = nlohmann::json::array();
  for (Eigen::Index i = 0; i < g.n_agents(); ++i)
    for (Eigen::Index k = 0; k < g.n_agents(); ++k)
      if (g.weights(i, k) > 0.0)
        edges.push_back({i + 1, k + 1, g.weights(i, k)});
  j["edges"] = std::move(edges);
  return j.dump();
}

WeightedDigraph graph_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigParse(std::string("graph JSON: ") + e.what());
  }
  if (!j.contains("n") || !j.contains("edges"))
    throw ConfigParse("graph JSON: expected keys \"n\" and \"edges\"");
  const int N = j["n"].get<int>();
  if (N < 2) throw ConfigParse("graph JSON: n must be >= 2");
  Matrix W = Matrix::Zero(N, N);
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 3)
      throw ConfigParse("graph JSON: each edge must be [i, j, w]");
    const int i = e[0].get<int>(), k = e[1].get<int>();
    if (i < 1 || i > N || k < 1 || k > N)
      throw ConfigParse("graph JSON: edge index out of range");
    W(i - 1, k - 1) = e[2].get<double>();
  }
  return WeightedDigraph(std::move(W));
}

}  // namespace synckit
