#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "sync/bench.hpp"
#include "sync/lmi.hpp"
#include "sync/sim.hpp"
#include "sync/synth.hpp"
#include "sync/verify.hpp"

namespace {

using namespace synckit;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParse("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigParse("cannot write " + path);
  out << text;
}

// Graph argument: either a preset name or a path to a JSON file.
WeightedDigraph load_graph(const std::string& arg) {
  for (const auto& name : preset_names())
    if (name == arg) return preset(arg);
  return graph_from_json(slurp(arg));
}

Plant load_plant(const std::string& arg) { return plant_preset(arg); }

int cmd_spectrum(const std::string& graph_arg) {
  const WeightedDigraph g = load_graph(graph_arg);
  const SpectrumSlice s = nonzero_spectrum(laplacian(g));
  std::printf("nu=%zu\n", s.nu());
  for (const Complex& l : s.eigenvalues)
    std::printf("%.12g %+.12gj\n", l.real(), l.imag());
  return 0;
}

int cmd_synth(const std::string& method, const std::string& plant_arg,
              const std::string& graph_arg, double kbar,
              const std::string& out_path) {
  const Plant p = load_plant(plant_arg);
  const WeightedDigraph g = load_graph(graph_arg);
  AlgorithmConfig cfg;
  cfg.kappa_bar = kbar;
  const SynthesisResult r = run_method(method, p, g, cfg);
  if (r.status == SynthStatus::Infeasible) {
    std::fprintf(stderr, "synthesis infeasible (method %s)\n", method.c_str());
    return 2;
  }
  const SpectrumSlice s = nonzero_spectrum(laplacian(g));
  const RateEstimate rate = estimate_rate(p, s, r.gain);
  std::printf("method=%s status=%s mu_star=%.6g mu_hat=%.6g |K|=%.6g iters=%d\n",
              method.c_str(), r.status == SynthStatus::Ok ? "ok" : "degraded",
              r.mu_star, rate.mu_hat, matrix_2norm(r.gain.K), r.iterations);
  const std::string json = gain_to_json(r.gain);
  if (out_path.empty())
    std::printf("%s\n", json.c_str());
  else
    spit(out_path, json + "\n");
  return 0;
}

int cmd_verify(const std::string& gain_path, double mu,
               const std::string& plant_arg, const std::string& graph_arg,
               const std::string& how) {
  const Plant p = load_plant(plant_arg);
  const WeightedDigraph g = load_graph(graph_arg);
  const SpectrumSlice s = nonzero_spectrum(laplacian(g));
  const Gain k = gain_from_json(slurp(gain_path));
  const UgesMethod m =
      how == "lyapunov" ? UgesMethod::Lyapunov : UgesMethod::Spectral;
  const bool ok = check_mu_uges(p, s, k, mu, m);
  const RateEstimate rate = estimate_rate(p, s, k);
  std::printf("mu=%.6g method=%s certified=%s mu_hat=%.6g\n", mu, how.c_str(),
              ok ? "yes" : "no", rate.mu_hat);
  return ok ? 0 : 2;
}

int cmd_simulate(const std::string& gain_path, const std::string& plant_arg,
                 const std::string& graph_arg, double horizon, double step,
                 std::uint64_t seed, const std::string& out_path) {
  const Plant p = load_plant(plant_arg);
  const WeightedDigraph g = load_graph(graph_arg);
  const Gain k = gain_from_json(slurp(gain_path));
  if (horizon <= 0.0) horizon = default_horizon(plant_arg);
  const Vector x0 = random_initial_state(p.n() * g.n_agents(), seed);
  const Trajectory traj = integrate(x0, p, k, laplacian(g), horizon, step);
  trajectory_to_csv(traj, out_path);
  const DecayFit fit = fit_decay(traj, 0.5);
  std::printf("samples=%zu final_dist=%.6g fitted_rate=%.6g\n",
              traj.times.size(), traj.distances.back(), fit.rate);
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& out_path,
              const std::string& traj_prefix) {
  const ScenarioConfig cfg = config_path.empty()
                                 ? default_config()
                                 : config_from_json(slurp(config_path));
  const std::vector<BenchRow> rows = run_benchmark(cfg);
  emit_table(rows, out_path);
  if (!traj_prefix.empty()) emit_trajectories(cfg, rows, traj_prefix);
  bool any_failed = false;
  for (const BenchRow& r : rows)
    if (r.status != "ok" && r.status != "degraded") any_failed = true;
  std::printf("%zu rows -> %s\n", rows.size(), out_path.c_str());
  return any_failed ? 2 : 0;
}

int cmd_dump_sdp(const std::string& plant_arg, const std::string& graph_arg,
                 double mu, double kbar, double alpha,
                 const std::string& out_path) {
  const Plant p = load_plant(plant_arg);
  const WeightedDigraph g = load_graph(graph_arg);
  const SpectrumSlice s = nonzero_spectrum(laplacian(g));
  const MultiplierSet m =
      MultiplierSet::scaled_identity(s.nu(), 2 * p.n(), alpha);
  const SdpProblem prob = assemble_synthesis(p, s, m, mu, kbar);
  const std::string json = sdp_to_json(prob);
  if (out_path.empty())
    std::printf("%s\n", json.c_str());
  else
    spit(out_path, json + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synchronizing state-feedback design for identical linear "
               "agents over directed graphs"};
  app.require_subcommand(1);

  std::string graph_arg, plant_arg = "osc", method = "alg1";
  std::string gain_path, out_path, config_path, traj_prefix, verify_how =
                                                                 "spectral";
  double kbar = 20.0, mu = 0.0, horizon = 0.0, step = 1e-3, alpha = 1.0;
  std::uint64_t seed = 42;

  auto* sc_spectrum = app.add_subcommand("spectrum", "Laplacian spectrum slice");
  sc_spectrum->add_option("graph", graph_arg, "preset name or JSON file")
      ->required();

  auto* sc_synth = app.add_subcommand("synth", "design a synchronizing gain");
  sc_synth->add_option("--method", method,
                       "alg1 | direct | riccati | listmann | aek");
  sc_synth->add_option("--plant", plant_arg, "osc | x29")->required();
  sc_synth->add_option("--graph", graph_arg, "preset name or JSON file")
      ->required();
  sc_synth->add_option("--kbar", kbar, "gain norm bound");
  sc_synth->add_option("--out", out_path, "gain JSON output path");

  auto* sc_verify = app.add_subcommand("verify", "certify a rate for a gain");
  sc_verify->add_option("--gain", gain_path, "gain JSON file")->required();
  sc_verify->add_option("--mu", mu, "rate to certify")->required();
  sc_verify->add_option("--plant", plant_arg)->required();
  sc_verify->add_option("--graph", graph_arg)->required();
  sc_verify->add_option("--how", verify_how, "spectral | lyapunov");

  auto* sc_sim = app.add_subcommand("simulate", "integrate the network");
  sc_sim->add_option("--gain", gain_path, "gain JSON file")->required();
  sc_sim->add_option("--plant", plant_arg)->required();
  sc_sim->add_option("--graph", graph_arg)->required();
  sc_sim->add_option("--horizon", horizon, "seconds (0 = plant default)");
  sc_sim->add_option("--step", step, "RK4 step");
  sc_sim->add_option("--seed", seed, "initial-state seed");
  sc_sim->add_option("--out", out_path, "trajectory CSV path")->required();

  auto* sc_bench = app.add_subcommand("bench", "run the benchmark table");
  sc_bench->add_option("--config", config_path, "JSON scenario config");
  sc_bench->add_option("--out", out_path, "CSV table path")->required();
  sc_bench->add_option("--traj-prefix", traj_prefix,
                       "also write per-cell trajectory CSVs");

  auto* sc_dump = app.add_subcommand("dump-sdp", "debug dump of one SDP");
  sc_dump->add_option("--plant", plant_arg)->required();
  sc_dump->add_option("--graph", graph_arg)->required();
  sc_dump->add_option("--mu", mu)->required();
  sc_dump->add_option("--kbar", kbar);
  sc_dump->add_option("--alpha", alpha, "scaled-identity multiplier");
  sc_dump->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_spectrum->parsed()) return cmd_spectrum(graph_arg);
    if (sc_synth->parsed())
      return cmd_synth(method, plant_arg, graph_arg, kbar, out_path);
    if (sc_verify->parsed())
      return cmd_verify(gain_path, mu, plant_arg, graph_arg, verify_how);
    if (sc_sim->parsed())
      return cmd_simulate(gain_path, plant_arg, graph_arg, horizon, step, seed,
                          out_path);
    if (sc_bench->parsed()) return cmd_bench(config_path, out_path, traj_prefix);
    if (sc_dump->parsed())
      return cmd_dump_sdp(plant_arg, graph_arg, mu, kbar, alpha, out_path);
  } catch (const SolverFailure& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
