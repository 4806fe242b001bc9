#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "brwss/ballot.hpp"
#include "brwss/cli.hpp"
#include "brwss/errors.hpp"
#include "brwss/hypercube.hpp"
#include "brwss/numerics.hpp"
#include "brwss/simulator.hpp"

namespace py = pybind11;
using namespace brwss;

#ifndef BRWSS_VERSION
#define BRWSS_VERSION "0.0.0"
#endif

namespace {

struct EnsembleResult {
  std::vector<std::optional<double>> hit_times;
  std::uint64_t censored = 0;
  std::optional<double> median;
};

EnsembleResult simulate(const ModelParams& p, int m, int replicas, std::uint64_t seed, double t_max,
                        const std::string& mode, bool cover, std::uint64_t switch_population,
                        unsigned threads) {
  SimConfig cfg;
  cfg.params = p;
  cfg.m = m;
  cfg.replicas = replicas;
  cfg.master_seed = seed;
  cfg.t_max = t_max;
  cfg.switch_population = switch_population;
  if (mode == "full") cfg.mode = SimMode::FullGenotype;
  else if (mode != "projected") throw ConfigError("mode must be 'projected' or 'full'");
  if (cover) cfg.observable = Observable::CoverTime;

  EnsembleStats stats;
  {
    py::gil_scoped_release release;
    stats = run_ensemble(cfg, threads);
  }
  EnsembleResult out;
  for (const auto& s : stats.samples) out.hit_times.push_back(s.hit_time);
  out.censored = stats.censored_count;
  if (stats.quantiles) out.median = stats.quantiles->median;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core routines of the brwss package";
  m.attr("__version__") = BRWSS_VERSION;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<RegimeError>(m, "RegimeError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int b, int d, double lambda1, double lambda2) {
             ModelParams p{b, d, lambda1, lambda2};
             p.validate();
             return p;
           }),
           py::arg("b"), py::arg("d"), py::arg("lambda1"), py::arg("lambda2") = 1.0)
      .def_static("from_rho", &ModelParams::from_rho, py::arg("b"), py::arg("d"), py::arg("rho"))
      .def_readonly("b", &ModelParams::b)
      .def_readonly("d", &ModelParams::d)
      .def_readonly("lambda1", &ModelParams::lambda1)
      .def_readonly("lambda2", &ModelParams::lambda2)
      .def_property_readonly("rho", &ModelParams::rho)
      .def("__repr__", [](const ModelParams& p) {
        std::ostringstream s;
        s << "ModelParams(b=" << p.b << ", d=" << p.d << ", lambda1=" << p.lambda1 << ", lambda2=" << p.lambda2
          << ")";
        return s.str();
      });

  py::class_<RootResult>(m, "RootResult")
      .def_readonly("t", &RootResult::t)
      .def_readonly("residual", &RootResult::residual)
      .def_readonly("sign_changes", &RootResult::sign_changes)
      .def_property_readonly("multiple_roots", &RootResult::multiple_roots);

  py::class_<RegimeConstants>(m, "RegimeConstants")
      .def_readonly("x0", &RegimeConstants::x0)
      .def_readonly("r", &RegimeConstants::r)
      .def_readonly("alpha", &RegimeConstants::alpha);

  py::class_<FptPrediction>(m, "Prediction")
      .def_property_readonly("regime", [](const FptPrediction& f) { return to_string(f.regime); })
      .def_readonly("m", &FptPrediction::m)
      .def_readonly("t_first_moment", &FptPrediction::t_first_moment)
      .def_readonly("t_predicted", &FptPrediction::t_predicted)
      .def_readonly("decomposition", &FptPrediction::decomposition)
      .def_readonly("warnings", &FptPrediction::warnings);

  py::class_<EnsembleResult>(m, "EnsembleResult")
      .def_readonly("hit_times", &EnsembleResult::hit_times)
      .def_readonly("censored", &EnsembleResult::censored)
      .def_readonly("median", &EnsembleResult::median);

  m.def("transition_log_prob", [](const ModelParams& p, int k, double t) { return transition_log_prob(p, k, t).value; },
        py::arg("params"), py::arg("m"), py::arg("t"));
  m.def("expected_particles_log",
        [](const ModelParams& p, int k, double t) { return expected_particles_log(p, k, t).value; },
        py::arg("params"), py::arg("m"), py::arg("t"));
  m.def("log_sphere_size", &log_sphere_size, py::arg("d"), py::arg("b"), py::arg("m"));
  m.def("lambert_w0", [](double x) { return lambert_w0(x); }, py::arg("x"));
  m.def("solve_first_moment", [](const ModelParams& p, int k) { return solve_first_moment(p, k); },
        py::arg("params"), py::arg("m"));
  m.def("regime_constants", [](int b, double rho) { return regime_constants(b, rho); }, py::arg("b"),
        py::arg("rho"));
  m.def("predict_slow", [](const ModelParams& p, int k) { return predict_slow(p, k); }, py::arg("params"),
        py::arg("m"));
  m.def("predict_fast", [](const ModelParams& p, int k) { return predict_fast(p, k); }, py::arg("params"),
        py::arg("m"));
  m.def("mutation_delay_coefficient",
        [](int b, double l1, double l2, double l2p) { return mutation_delay_coefficient(b, l1, l2, l2p); },
        py::arg("b"), py::arg("lambda1"), py::arg("lambda2"), py::arg("lambda2_prime"));
  m.def("ballot_exact", [](int n, double a, double b_end) { return ballot_exact({n, a, b_end}); }, py::arg("n"),
        py::arg("a") = 1.0, py::arg("b_end") = 1.0);
  m.def(
      "ballot_mc",
      [](int n, double a, double b_end, std::int64_t replicas, std::uint64_t seed) {
        Rng rng(seed);
        const auto e = ballot_mc({n, a, b_end}, replicas, rng);
        return py::make_tuple(e.estimate, e.std_err);
      },
      py::arg("n"), py::arg("a") = 1.0, py::arg("b_end") = 1.0, py::arg("replicas") = 100000,
      py::arg("seed") = 0);
  m.def("simulate", &simulate, py::arg("params"), py::arg("m"), py::arg("replicas") = 1000, py::arg("seed") = 0,
        py::arg("t_max") = 1e3, py::arg("mode") = "projected", py::arg("cover") = false,
        py::arg("switch_population") = 0, py::arg("threads") = 0);
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a brwss subcommand; returns (exit_code, stdout, stderr).");
}
