// Copyright 2026 The edgesched Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "edgesched/cluster_io.hpp"
#include "edgesched/experiment.hpp"
#include "edgesched/oracle.hpp"

namespace py = pybind11;
using namespace edgesched;

namespace {

Cluster cluster_or_default(const std::optional<std::string>& path) {
  return path ? load_cluster(*path) : default_cluster();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "QoS-aware inference scheduling simulator";

  auto error = py::register_exception<Error>(m, "EdgeschedError", PyExc_RuntimeError);
  (void)error;

  py::class_<ConfigChoice>(m, "ConfigChoice")
      .def_static("parse", &ConfigChoice::parse)
      .def("__str__", &ConfigChoice::to_string)
      .def("__repr__", [](const ConfigChoice& c) { return "ConfigChoice('" + c.to_string() + "')"; })
      .def("__eq__", [](const ConfigChoice& a, const ConfigChoice& b) { return a == b; });

  py::class_<Cluster>(m, "Cluster")
      .def_property_readonly("worker_ids",
                             [](const Cluster& c) {
                               std::vector<std::string> ids;
                               for (const auto& w : c.workers()) ids.push_back(w.worker_id);
                               return ids;
                             })
      .def_property_readonly("engine_ids",
                             [](const Cluster& c) {
                               std::vector<std::string> ids;
                               for (const auto& e : c.engines()) ids.push_back(e.engine_id);
                               return ids;
                             })
      .def("configs",
           [](const Cluster& c, const std::string& worker_id) {
             std::vector<std::string> out;
             for (const auto& cfg : c.worker(worker_id).configs()) out.push_back(cfg.to_string());
             return out;
           })
      .def("power", [](const Cluster& c, const std::string& worker_id,
                       const std::string& config) { return nominal_power(c, c.worker(worker_id), ConfigChoice::parse(config)); })
      .def("to_yaml", &dump_cluster);

  m.def("default_cluster", &default_cluster);
  m.def("load_cluster", [](const std::string& path) { return load_cluster(path); });
  m.def("parse_cluster", &parse_cluster, py::arg("text"), py::arg("source") = "<cluster>");

  py::class_<ProfileRecord>(m, "ProfileRecord")
      .def(py::init([](std::string engine, std::string worker, const std::string& config, double qps,
                       double preproc_s, double total_s) {
             return ProfileRecord{std::move(engine), std::move(worker), ConfigChoice::parse(config), qps, preproc_s,
                                  total_s};
           }),
           py::arg("engine_id"), py::arg("worker_id"), py::arg("config"), py::arg("qps"), py::arg("preproc_s"),
           py::arg("total_s"))
      .def_readonly("engine_id", &ProfileRecord::engine_id)
      .def_readonly("worker_id", &ProfileRecord::worker_id)
      .def_property_readonly("config", [](const ProfileRecord& r) { return r.config.to_string(); })
      .def_readonly("qps", &ProfileRecord::qps)
      .def_readonly("preproc_s", &ProfileRecord::preproc_s)
      .def_readonly("total_s", &ProfileRecord::total_s);

  m.def(
      "synth_profiles",
      [](const Cluster& c, std::uint64_t seed) { return synth_profiles(c, c.engines(), seed); }, py::arg("cluster"),
      py::arg("seed"));
  m.def("dump_profiles", &dump_profiles);
  m.def("parse_profiles", &parse_profiles, py::arg("text"), py::arg("cluster"), py::arg("source") = "<profiles>");

  py::class_<ConfigurationDictionary>(m, "ConfigurationDictionary")
      .def("lookup",
           [](const ConfigurationDictionary& d, const std::string& engine,
              const std::string& worker) -> std::optional<py::dict> {
             auto e = d.lookup(engine, worker);
             if (!e) return std::nullopt;
             py::dict out;
             out["config"] = e->config.to_string();
             out["qps"] = e->qps;
             out["preproc_s"] = e->preproc_s;
             return out;
           })
      .def("default_config",
           [](const ConfigurationDictionary& d, const std::string& worker) {
             return d.worker_default(worker).config.to_string();
           })
      .def("__len__", [](const ConfigurationDictionary& d) { return d.entries().size(); })
      .def("to_json", &dictionary_to_json);

  m.def("build_dictionary", &build_dictionary, py::arg("records"), py::arg("cluster"));
  m.def("dictionary_from_json", &dictionary_from_json, py::arg("text"), py::arg("cluster"));

  m.def("policies", [] {
    std::vector<std::string> out;
    for (auto k : all_policies()) out.emplace_back(to_string(k));
    return out;
  });

  m.def(
      "gen_trace_csv",
      [](const Cluster& c, const std::vector<ProfileRecord>& records, const std::string& regime, std::uint64_t seed,
         int n_jobs) { return dump_trace(make_scenario(c, records, regime, seed, n_jobs).trace); },
      py::arg("cluster"), py::arg("records"), py::arg("regime"), py::arg("seed"), py::arg("n_jobs") = 24);

  m.def(
      "run_policy_json",
      [](const Cluster& c, const std::vector<ProfileRecord>& records, const std::string& regime,
         const std::string& policy, std::uint64_t seed, int n_jobs, double tick_s, double exec_noise,
         std::uint64_t noise_seed) {
        py::gil_scoped_release release;
        auto scenario = make_scenario(c, records, regime, seed, n_jobs);
        SimOptions sim{tick_s, exec_noise, noise_seed};
        auto report = run_policy(scenario, c, parse_policy(policy), sim);
        report.seed = seed;
        return report_to_json(report);
      },
      py::arg("cluster"), py::arg("records"), py::arg("regime"), py::arg("policy"), py::arg("seed") = 1,
      py::arg("n_jobs") = 24, py::arg("tick_s") = 5.0, py::arg("exec_noise") = 0.0, py::arg("noise_seed") = 0);

  m.def(
      "run_experiment_json",
      [](const std::string& config_yaml, const std::optional<std::string>& out_dir) {
        auto config = parse_experiment_config(config_yaml, "<config>");
        check_experiment_config(config);
        ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = run_experiment(config);
          if (out_dir) write_experiment(result, *out_dir);
        }
        std::vector<std::string> reports;
        for (const auto& r : result.reports) reports.push_back(report_to_json(r));
        return py::make_tuple(reports, summary_to_json(result.summary));
      },
      py::arg("config_yaml") = "", py::arg("out_dir") = py::none());

  m.def(
      "compare_json",
      [](const std::vector<std::string>& reports_json, const std::optional<std::string>& cluster_path) {
        std::vector<RunReport> reports;
        for (const auto& r : reports_json) reports.push_back(report_from_json(r));
        return summary_to_json(compare(reports, edge_workers(cluster_or_default(cluster_path))));
      },
      py::arg("reports"), py::arg("cluster_path") = py::none());

  m.def(
      "oracle_check",
      [](const Cluster& c, const std::vector<ProfileRecord>& records, std::size_t instances, std::size_t max_jobs,
         std::uint64_t seed) {
        OracleCheck check;
        {
          py::gil_scoped_release release;
          check = oracle_check(c, records, build_dictionary(records, c), instances, max_jobs, seed);
        }
        py::dict out;
        out["instances"] = check.instances;
        out["equal"] = check.equal;
        out["dominance_failures"] = check.dominance_failures;
        out["synergai_violations"] = check.synergai_violations;
        out["oracle_violations"] = check.oracle_violations;
        out["max_gap"] = check.max_gap;
        out["equal_fraction"] = check.equal_fraction();
        return out;
      },
      py::arg("cluster"), py::arg("records"), py::arg("instances") = 500, py::arg("max_jobs") = 6,
      py::arg("seed") = 0);
}
