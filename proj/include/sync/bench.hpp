#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sync/sim.hpp"
#include "sync/synth.hpp"

namespace synckit {

Plant plant_preset(const std::string& name);  // osc | x29
std::vector<std::string> plant_preset_names();

/// Simulation horizon used for figures/benchmarks: 10 s for the x29
/// dynamics, 20 s otherwise.
double default_horizon(const std::string& plant_name);

std::string gain_to_json(const Gain& g);
Gain gain_from_json(const std::string& text);

struct ScenarioConfig {
  struct PlantSpec {
    std::string name;
    Plant plant;
  };
  struct GraphSpec {
    std::string name;
    WeightedDigraph graph;
  };
  std::vector<PlantSpec> plants;
  std::vector<GraphSpec> graphs;
  std::vector<std::string> methods;  // subset of riccati listmann aek direct alg1
  AlgorithmConfig algo;
  double sim_step = 1e-3;
  double sim_horizon = 0.0;  // 0 = per-plant default
  std::uint64_t seed = 42;
  int workers = 1;
};

/// Parses the JSON config; unset fields keep their defaults. The SYNC_SEED
/// environment variable overrides the configured seed.
ScenarioConfig config_from_json(const std::string& text);
ScenarioConfig default_config();

struct BenchRow {
  std::string scenario;
  std::string method;
  double mu_hat = 0.0;    // recomputed spectrally from the emitted gain
  double gain_norm = 0.0;  // recomputed, never trusted from synth
  double time_s = 0.0;
  int iters = 0;
  bool has_iters = false;  // only alg1 reports iterations
  std::string status = "ok";
  Matrix K;  // carried for trajectory export, not serialized
};

SynthesisResult run_method(const std::string& method, const Plant& p,
                           const WeightedDigraph& g, const AlgorithmConfig& cfg);

/// One row per (scenario, method); per-cell failures are recorded in the
/// status column instead of aborting the batch.
std::vector<BenchRow> run_benchmark(const ScenarioConfig& cfg);

/// CSV with header scenario,method,mu_hat,gain_norm,time_s,iters,status,
/// ordered by scenario then method.
void emit_table(const std::vector<BenchRow>& rows, const std::string& path);
std::vector<BenchRow> parse_table(const std::string& path);

/// Per (scenario, method) trajectory CSV; the initial state is shared per
/// scenario across methods. Returns the written paths.
std::vector<std::string> emit_trajectories(const ScenarioConfig& cfg,
                                           const std::vector<BenchRow>& rows,
                                           const std::string& path_prefix);

}  // namespace synckit
