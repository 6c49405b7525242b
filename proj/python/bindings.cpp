#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mgsizer/commands.hpp"
#include "mgsizer/errors.hpp"

namespace py = pybind11;
using namespace mgsizer;

namespace {

ExperimentConfig config_or_default(const std::string& json_text) {
  return parse_config(json_text.empty() ? "{}" : json_text);
}

py::dict objectives_dict(const ObjectiveVector& o) {
  py::dict d;
  d["cost"] = o.cost;
  d["pec"] = o.pec;
  d["lpsp"] = o.lpsp;
  d["feasible"] = o.feasible;
  d["violation"] = o.violation;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Microgrid sizing core: device models, dispatch, objectives and GA search";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  py::class_<SizingConfig>(m, "SizingConfig")
      .def(py::init<int, int, int, int>(), py::arg("wt") = 0, py::arg("pv") = 0,
           py::arg("dg") = 0, py::arg("es") = 0)
      .def_readwrite("wt", &SizingConfig::n_wt)
      .def_readwrite("pv", &SizingConfig::n_pv)
      .def_readwrite("dg", &SizingConfig::n_dg)
      .def_readwrite("es", &SizingConfig::n_es)
      .def("__repr__", [](const SizingConfig& c) {
        return "SizingConfig(wt=" + std::to_string(c.n_wt) + ", pv=" + std::to_string(c.n_pv) +
               ", dg=" + std::to_string(c.n_dg) + ", es=" + std::to_string(c.n_es) + ")";
      });

  m.def("wt_power", [](double v) { return wt_power(v, WtParams{}); }, py::arg("wind_speed"),
        "Turbine output (kW) at the default parameters.");
  m.def("pv_power", [](double g, double t) { return pv_power(g, t, PvParams{}); },
        py::arg("irradiance"), py::arg("temperature"));
  m.def("capacity_loss", [](double ah) { return capacity_loss(ah, BessParams{}); },
        py::arg("throughput_ah"), "Capacity-loss fraction after the given throughput.");
  m.def(
      "adaptive_probabilities",
      [](int g, int gc) {
        const auto r = adaptive_probabilities(g, gc, GaSettings{});
        return py::make_tuple(r.p_c, r.p_m);
      },
      py::arg("g"), py::arg("g_c") = 0);
  m.def(
      "ora",
      [](double cost, double pec, double cost_star, double pec_star) {
        return ora({cost, pec}, WorstCase{cost_star, pec_star}).area;
      },
      py::arg("cost"), py::arg("pec"), py::arg("cost_star") = 1.6e7, py::arg("pec_star") = 4e6);
  m.def(
      "diverse_count",
      [](const std::vector<std::pair<double, double>>& pts, double cost_gap, double pec_gap) {
        std::vector<ObjectivePoint> v;
        for (const auto& [c, p] : pts) v.push_back({c, p});
        const auto d = diverse_count(v, cost_gap, pec_gap);
        return py::make_tuple(d.n_cost, d.n_pec);
      },
      py::arg("points"), py::arg("cost_gap") = 1e5, py::arg("pec_gap") = 2e4);

  m.def(
      "scenario_count",
      [](const std::string& config) { return full_scenario_set(config_or_default(config)).size(); },
      py::arg("config") = "");

  m.def(
      "evaluate",
      [](const SizingConfig& sizing, const std::string& config) {
        const ExperimentConfig cfg = config_or_default(config);
        const ScenarioSet set = active_scenario_set(cfg);
        Evaluation e;
        {
          py::gil_scoped_release release;
          e = evaluate(sizing, set, cfg.model);
        }
        py::dict d = objectives_dict(e.objectives);
        d["renewable_proportion"] = e.renewable_proportion;
        d["c_init"] = e.breakdown.c_init;
        d["c_degradation"] = e.breakdown.c_degradation;
        return d;
      },
      py::arg("sizing"), py::arg("config") = "",
      "Objectives for one sizing on the config's active scenario set.");

  m.def(
      "optimize",
      [](const std::string& algorithm, const std::string& config) {
        const ExperimentConfig cfg = config_or_default(config);
        const Algorithm a = algorithm.empty() ? cfg.algorithm : parse_algorithm(algorithm);
        const ScenarioSet set = active_scenario_set(cfg);
        OptimizeReport r;
        {
          py::gil_scoped_release release;
          r = optimize(cfg, a, set, seeds::ga(cfg.seed));
        }
        py::list points;
        for (const auto& p : r.run.frontier.points) {
          py::dict d = objectives_dict(p.objectives);
          d["sizing"] = p.config;
          points.append(d);
        }
        py::dict out;
        out["frontier"] = points;
        out["largest_ora"] = r.largest.empty ? 0.0 : r.largest.area;
        out["diverse_count"] = py::make_tuple(r.diverse.n_cost, r.diverse.n_pec);
        out["evaluations"] = r.run.evaluations;
        return out;
      },
      py::arg("algorithm") = "", py::arg("config") = "",
      "Runs one algorithm; returns the frontier and its metrics.");
}
