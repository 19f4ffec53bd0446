#include "sync/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

namespace synckit {

Plant plant_preset(const std::string& name) {
  if (name == "osc") {
    Matrix A(2, 2), B(2, 1);
    A << 0, -1, 1, 0;
    B << 0, 1;
    return Plant(A, B);
  }
  if (name == "x29") {
    // Lateral dynamics of the Grumman X-29A forward-swept wing.
    Matrix A(4, 4), B(4, 2);
    A << -2.059, 0.997, -16.55, 0,
        -0.1023, -0.0679, 6.779, 0,
        -0.0603, -0.9928, -0.1645, 0.04413,
        1, 0.07168, 0, 0.0;
    B << 1.347, 0.2365,
        0.09194, -0.07056,
        -0.0006141, 0.0006866,
        0, 0;
    return Plant(A, B);
  }
  throw UnknownPreset("unknown plant preset: " + name);
}

std::vector<std::string> plant_preset_names() { return {"osc", "x29"}; }

double default_horizon(const std::string& plant_name) {
  return plant_name == "x29" ? 10.0 : 20.0;
}

std::string gain_to_json(const Gain& g) {
  nlohmann::json j;
  j["m"] = g.K.rows();
  j["n"] = g.K.cols();
  auto entries = nlohmann::json::array();
  for (Eigen::Index i = 0; i < g.K.rows(); ++i)
    for (Eigen::Index c = 0; c < g.K.cols(); ++c) entries.push_back(g.K(i, c));
  j["K"] = std::move(entries);
  return j.dump();
}

Gain gain_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigParse(std::string("gain JSON: ") + e.what());
  }
  if (!j.contains("m") || !j.contains("n") || !j.contains("K"))
    throw ConfigParse("gain JSON: expected keys m, n, K");
  const Eigen::Index m = j["m"].get<Eigen::Index>();
  const Eigen::Index n = j["n"].get<Eigen::Index>();
  const auto& entries = j["K"];
  if (static_cast<Eigen::Index>(entries.size()) != m * n)
    throw ConfigParse("gain JSON: K must hold m*n row-major entries");
  Gain g;
  g.K.resize(m, n);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index c = 0; c < n; ++c) g.K(i, c) = entries[idx++].get<double>();
  return g;
}

namespace {

Matrix matrix_from_json(const nlohmann::json& rows) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  if (r == 0) throw ConfigParse("config: empty matrix");
  const Eigen::Index c = static_cast<Eigen::Index>(rows[0].size());
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != c)
      throw ConfigParse("config: ragged matrix");
    for (Eigen::Index k = 0; k < c; ++k) M(i, k) = rows[i][k].get<double>();
  }
  return M;
}

ScenarioConfig::PlantSpec plant_spec_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    return {name, plant_preset(name)};
  }
  if (!j.contains("A") || !j.contains("B"))
    throw ConfigParse("config: inline plant needs A and B");
  std::string name = j.value("name", "inline");
  return {name, Plant(matrix_from_json(j["A"]), matrix_from_json(j["B"]))};
}

ScenarioConfig::GraphSpec graph_spec_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    return {name, preset(name)};
  }
  std::string name = j.value("name", "inline");
  return {name, graph_from_json(j.dump())};
}

const std::vector<std::string> kAllMethods = {"riccati", "listmann", "aek", "direct",
                                              "alg1"};

}  // namespace

ScenarioConfig default_config() {
  ScenarioConfig cfg;
  for (const auto& p : plant_preset_names()) cfg.plants.push_back({p, plant_preset(p)});
  for (const auto& g : preset_names()) cfg.graphs.push_back({g, preset(g)});
  cfg.methods = kAllMethods;
  return cfg;
}

ScenarioConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigParse(std::string("config JSON: ") + e.what());
  }
  ScenarioConfig cfg;
  try {
    if (j.contains("plants"))
      for (const auto& p : j["plants"]) cfg.plants.push_back(plant_spec_from_json(p));
    else if (j.contains("plant"))
      cfg.plants.push_back(plant_spec_from_json(j["plant"]));
    else
      for (const auto& p : plant_preset_names()) cfg.plants.push_back({p, plant_preset(p)});

    if (j.contains("graphs"))
      for (const auto& g : j["graphs"]) cfg.graphs.push_back(graph_spec_from_json(g));
    else if (j.contains("graph"))
      cfg.graphs.push_back(graph_spec_from_json(j["graph"]));
    else
      for (const auto& g : preset_names()) cfg.graphs.push_back({g, preset(g)});

    if (j.contains("methods"))
      cfg.methods = j["methods"].get<std::vector<std::string>>();
    else
      cfg.methods = kAllMethods;
    for (const auto& m : cfg.methods)
      if (std::find(kAllMethods.begin(), kAllMethods.end(), m) == kAllMethods.end())
        throw ConfigParse("config: unknown method " + m);

    cfg.algo.kappa_bar = j.value("kappa_bar", cfg.algo.kappa_bar);
    cfg.algo.tolerance = j.value("tolerance", cfg.algo.tolerance);
    cfg.algo.mu_bisection_tol = j.value("mu_bisection_tol", cfg.algo.mu_bisection_tol);
    cfg.algo.mu_cap = j.value("mu_cap", cfg.algo.mu_cap);
    cfg.algo.max_outer_iterations =
        j.value("max_outer_iterations", cfg.algo.max_outer_iterations);
    if (j.contains("alpha_grid"))
      cfg.algo.alpha_grid = j["alpha_grid"].get<std::vector<double>>();
    cfg.sim_step = j.value("sim_step", cfg.sim_step);
    cfg.sim_horizon = j.value("sim_horizon", cfg.sim_horizon);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.workers = j.value("workers", cfg.workers);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigParse(std::string("config JSON: ") + e.what());
  }
  if (const char* env = std::getenv("SYNC_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
  cfg.algo.validate();
  return cfg;
}

SynthesisResult run_method(const std::string& method, const Plant& p,
                           const WeightedDigraph& g, const AlgorithmConfig& cfg) {
  if (method == "alg1") return algorithm1(p, g, cfg);
  if (method == "direct") return direct_design(p, g, cfg);
  const SpectrumSlice s = nonzero_spectrum(laplacian(g));
  if (method == "riccati") return riccati_design(p, s, cfg);
  if (method == "listmann") return listmann_design(p, s, cfg);
  if (method == "aek") return aek_design(p, s, cfg);
  throw ConfigParse("unknown method: " + method);
}

std::vector<BenchRow> run_benchmark(const ScenarioConfig& cfg) {
  struct Cell {
    std::size_t plant, graph, method;
  };
  std::vector<Cell> cells;
  for (std::size_t pi = 0; pi < cfg.plants.size(); ++pi)
    for (std::size_t gi = 0; gi < cfg.graphs.size(); ++gi)
      for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi)
        cells.push_back({pi, gi, mi});

  std::vector<BenchRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= cells.size()) return;
      const Cell& cell = cells[idx];
      const auto& plant = cfg.plants[cell.plant];
      const auto& graph = cfg.graphs[cell.graph];
      BenchRow row;
      row.scenario = plant.name + "_" + graph.name;
      row.method = cfg.methods[cell.method];
      try {
        const SynthesisResult res = run_method(row.method, plant.plant, graph.graph, cfg.algo);
        row.time_s = res.wall_time;
        if (res.status == SynthStatus::Infeasible) {
          row.status = "infeasible";
        } else {
          row.status = res.status == SynthStatus::Degraded ? "degraded" : "ok";
          row.K = res.gain.K;
          const SpectrumSlice s = nonzero_spectrum(laplacian(graph.graph));
          row.mu_hat = estimate_rate(plant.plant, s, res.gain).mu_hat;
          row.gain_norm = matrix_2norm(res.gain.K);
          if (row.method == "alg1") {
            row.iters = res.iterations;
            row.has_iters = true;
          }
        }
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
      rows[idx] = std::move(row);
    }
  };
  const int n_workers = std::max(1, cfg.workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    if (a.scenario != b.scenario) return a.scenario < b.scenario;
    return a.method < b.method;
  });
  return rows;
}

void emit_table(const std::vector<BenchRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_table: cannot open " + path);
  out << "scenario,method,mu_hat,gain_norm,time_s,iters,status\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.method << ',';
    std::snprintf(buf, sizeof(buf), "%.6g", r.mu_hat);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.6g", r.gain_norm);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.3f", r.time_s);
    out << buf << ',';
    if (r.has_iters) out << r.iters;
    out << ',' << r.status << "\n";
  }
}

std::vector<BenchRow> parse_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("parse_table: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "scenario,method,mu_hat,gain_norm,time_s,iters,status")
    throw std::runtime_error("parse_table: bad header");
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    BenchRow r;
    std::getline(ss, r.scenario, ',');
    std::getline(ss, r.method, ',');
    std::getline(ss, field, ',');
    r.mu_hat = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    r.gain_norm = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    r.time_s = std::strtod(field.c_str(), nullptr);
    std::getline(ss, field, ',');
    r.has_iters = !field.empty();
    if (r.has_iters) r.iters = std::atoi(field.c_str());
    std::getline(ss, r.status);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<std::string> emit_trajectories(const ScenarioConfig& cfg,
                                           const std::vector<BenchRow>& rows,
                                           const std::string& path_prefix) {
  std::vector<std::string> written;
  for (const auto& plant : cfg.plants) {
    for (const auto& graph : cfg.graphs) {
      const std::string scenario = plant.name + "_" + graph.name;
      const Eigen::Index dim = plant.plant.n() * graph.graph.n_agents();
      const Vector x0 = random_initial_state(dim, cfg.seed);
      const Laplacian L = laplacian(graph.graph);
      const double horizon =
          cfg.sim_horizon > 0.0 ? cfg.sim_horizon : default_horizon(plant.name);
      for (const auto& row : rows) {
        if (row.scenario != scenario || row.K.size() == 0) continue;
        if (row.status != "ok" && row.status != "degraded") continue;
        const Trajectory traj =
            integrate(x0, plant.plant, Gain{row.K}, L, horizon, cfg.sim_step);
        const std::string path = path_prefix + scenario + "_" + row.method + ".csv";
        trajectory_to_csv(traj, path);
        written.push_back(path);
      }
    }
  }
  return written;
}

}  // namespace synckit
