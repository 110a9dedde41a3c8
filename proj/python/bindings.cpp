#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "selfconf/bounds.hpp"
#include "selfconf/error.hpp"
#include "selfconf/harness.hpp"

namespace py = pybind11;
using namespace selfconf;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Scenario runner and closed-form bounds";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<OracleCapError>(m, "OracleCapError", base.ptr());
  py::register_exception<UndefinedMetricError>(m, "UndefinedMetricError", base.ptr());
  py::register_exception<DegenerateGeometryError>(m, "DegenerateGeometryError", base.ptr());

  py::class_<Scenario>(m, "Scenario")
      .def_property_readonly("experiment",
                             [](const Scenario& s) { return to_string(s.experiment); })
      .def_readwrite("seeds", &Scenario::seeds)
      .def_readwrite("oracle", &Scenario::oracle)
      .def("validate", &Scenario::validate)
      .def("to_json", &scenario_json);

  m.def("parse_scenario", &parse_scenario, py::arg("text"));
  m.def("load_scenario", &load_scenario, py::arg("path"));

  py::class_<ScenarioResult>(m, "ScenarioResult")
      .def_readonly("scenario", &ScenarioResult::scenario)
      .def_readonly("summary", &ScenarioResult::summary)
      .def_property_readonly("metrics_json",
                             [](const ScenarioResult& r) {
                               std::vector<std::string> out;
                               for (const auto& run : r.runs) out.push_back(metrics_json(run.metrics));
                               return out;
                             })
      .def_property_readonly("tables",
                             [](const ScenarioResult& r) {
                               py::dict out;
                               for (const auto& t : r.tables)
                                 out[py::str(t.name)] = py::make_tuple(t.columns, t.rows);
                               return out;
                             })
      .def_property_readonly("aggregate",
                             [](const ScenarioResult& r) {
                               py::list out;
                               for (const auto& a : r.aggregate) {
                                 py::dict d;
                                 d["variant"] = a.variant;
                                 d["metric"] = a.metric;
                                 d["count"] = a.count;
                                 d["mean"] = a.mean;
                                 d["min"] = a.min;
                                 d["max"] = a.max;
                                 out.append(d);
                               }
                               return out;
                             })
      .def("write", &write_outputs, py::arg("dir"));

  m.def("run_scenario", &run_scenario, py::arg("scenario"),
        py::call_guard<py::gil_scoped_release>());
  m.def("evaluate_bounds", &evaluate_bounds, py::arg("scenario"));

  m.def(
      "epsilon_delta",
      [](double alpha, double contention_range, double interference_range, double n_nodes,
         double tx_power, double noise_power, double sinr_threshold, double l_th,
         double epsilon0) {
        BoundInputs in;
        in.chan = {alpha, noise_power, tx_power, sinr_threshold};
        in.nbhd = {contention_range, interference_range};
        in.n_nodes = n_nodes;
        in.l_th = l_th;
        in.epsilon0 = epsilon0;
        const auto r = epsilon_delta(in);
        py::dict d;
        d["complexity"] = r.complexity;
        d["i3"] = r.i3;
        d["i_r"] = r.i_r;
        d["i_d"] = r.i_d;
        d["k_u"] = r.k_u;
        d["epsilon_delta"] = r.epsilon_delta;
        d["display_epsilon"] = r.display_epsilon;
        return d;
      },
      py::arg("alpha"), py::arg("contention_range"), py::arg("interference_range"),
      py::arg("n_nodes"), py::arg("tx_power") = 100.0, py::arg("noise_power") = 0.1,
      py::arg("sinr_threshold") = 20.0, py::arg("l_th") = 2.0, py::arg("epsilon0") = 0.0);
}
