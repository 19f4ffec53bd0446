#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sync/bench.hpp"
#include "sync/sim.hpp"
#include "sync/synth.hpp"
#include "sync/verify.hpp"

namespace py = pybind11;
using namespace synckit;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Synchronizing-controller design for identical linear agents over "
            "directed graphs";

  // ---- graph ----
  py::class_<WeightedDigraph>(m, "WeightedDigraph")
      .def(py::init<Matrix>(), py::arg("weights"))
      .def_readonly("weights", &WeightedDigraph::weights)
      .def_property_readonly("n_agents", &WeightedDigraph::n_agents);
  py::class_<Laplacian>(m, "Laplacian").def_readonly("L", &Laplacian::L);
  py::class_<SpectrumSlice>(m, "SpectrumSlice")
      .def_readonly("eigenvalues", &SpectrumSlice::eigenvalues)
      .def_property_readonly("nu", &SpectrumSlice::nu);
  m.def("laplacian", &laplacian);
  m.def("nonzero_spectrum", &nonzero_spectrum, py::arg("laplacian"),
        py::arg("dedup_tolerance") = kDedupTolerance);
  m.def("is_connected", &is_connected);
  m.def("graph_preset", &preset, py::arg("name"), py::arg("n_agents") = 0);
  m.def("graph_preset_names", &preset_names);
  m.def("graph_to_json", &graph_to_json);
  m.def("graph_from_json", &graph_from_json);

  // ---- linalg / plant ----
  py::class_<Plant>(m, "Plant")
      .def(py::init<Matrix, Matrix>(), py::arg("A"), py::arg("B"))
      .def_readonly("A", &Plant::A)
      .def_readonly("B", &Plant::B)
      .def_property_readonly("n", &Plant::n)
      .def_property_readonly("m", &Plant::m);
  py::class_<Gain>(m, "Gain")
      .def(py::init([](Matrix K) { return Gain{std::move(K)}; }), py::arg("K"))
      .def_readonly("K", &Gain::K);
  m.def("spectral_abscissa",
        py::overload_cast<const Matrix&>(&spectral_abscissa));
  m.def("matrix_2norm", &matrix_2norm);
  m.def("is_controllable", &is_controllable);
  m.def("solve_care", &solve_care, py::arg("plant"), py::arg("a"), py::arg("b"));
  m.def("plant_preset", &plant_preset);
  m.def("plant_preset_names", &plant_preset_names);

  // ---- synthesis ----
  py::class_<AlgorithmConfig>(m, "AlgorithmConfig")
      .def(py::init<>())
      .def_readwrite("kappa_bar", &AlgorithmConfig::kappa_bar)
      .def_readwrite("tolerance", &AlgorithmConfig::tolerance)
      .def_readwrite("alpha_grid", &AlgorithmConfig::alpha_grid)
      .def_readwrite("mu_bisection_tol", &AlgorithmConfig::mu_bisection_tol)
      .def_readwrite("mu_cap", &AlgorithmConfig::mu_cap)
      .def_readwrite("max_outer_iterations", &AlgorithmConfig::max_outer_iterations);
  py::enum_<SynthStatus>(m, "SynthStatus")
      .value("Ok", SynthStatus::Ok)
      .value("Infeasible", SynthStatus::Infeasible)
      .value("Degraded", SynthStatus::Degraded);
  py::class_<SynthesisResult>(m, "SynthesisResult")
      .def_readonly("status", &SynthesisResult::status)
      .def_readonly("gain", &SynthesisResult::gain)
      .def_readonly("mu_star", &SynthesisResult::mu_star)
      .def_readonly("mu_trace", &SynthesisResult::mu_trace)
      .def_readonly("iterations", &SynthesisResult::iterations)
      .def_readonly("wall_time", &SynthesisResult::wall_time)
      .def_readonly("method", &SynthesisResult::method);
  m.def("design", &run_method, py::arg("method"), py::arg("plant"), py::arg("graph"),
        py::arg("config") = AlgorithmConfig{},
        "Run one design method: riccati | listmann | aek | direct | alg1");

  // ---- verification ----
  py::class_<RateEstimate>(m, "RateEstimate")
      .def_readonly("mu_hat", &RateEstimate::mu_hat)
      .def_readonly("worst_k", &RateEstimate::worst_k)
      .def_readonly("per_mode_abscissas", &RateEstimate::per_mode_abscissas);
  py::enum_<UgesMethod>(m, "UgesMethod")
      .value("Spectral", UgesMethod::Spectral)
      .value("Lyapunov", UgesMethod::Lyapunov);
  m.def("estimate_rate", &estimate_rate, py::arg("plant"), py::arg("spectrum"),
        py::arg("gain"));
  m.def("check_mu_uges", &check_mu_uges, py::arg("plant"), py::arg("spectrum"),
        py::arg("gain"), py::arg("mu"), py::arg("method") = UgesMethod::Spectral);

  // ---- simulation ----
  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("distances", &Trajectory::distances)
      .def_readonly("states", &Trajectory::states);
  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("overshoot", &DecayFit::overshoot)
      .def_readonly("rate", &DecayFit::rate)
      .def_readonly("window_start", &DecayFit::window_start)
      .def_readonly("window_end", &DecayFit::window_end)
      .def_readonly("residual", &DecayFit::residual);
  m.def("integrate", &integrate, py::arg("x0"), py::arg("plant"), py::arg("gain"),
        py::arg("laplacian"), py::arg("horizon"), py::arg("step") = 1e-3);
  m.def("dist_to_sync", &dist_to_sync, py::arg("x"), py::arg("N"), py::arg("n"));
  m.def("fit_decay", &fit_decay, py::arg("trajectory"), py::arg("window_fraction") = 0.5);
  m.def("random_initial_state", &random_initial_state, py::arg("dim"), py::arg("seed"));
  m.def("default_horizon", &default_horizon);

  // ---- serialization ----
  m.def("gain_to_json", &gain_to_json);
  m.def("gain_from_json", &gain_from_json);
}
