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

#include "edgesched/cluster_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace edgesched {
namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, ErrorKind kind, const std::string& why) const {
    throw Error(kind, where(node) + why);
  }

  std::string where(const YAML::Node& node) const {
    auto mark = node.Mark();
    if (mark.is_null()) return source_ + ": ";
    return source_ + ":" + std::to_string(mark.line + 1) + ": ";
  }

  const YAML::Node require(const YAML::Node& parent, const char* key) const {
    auto child = parent[key];
    if (!child) fail(parent, ErrorKind::Parse, std::string("missing field '") + key + "'");
    return child;
  }

  template <typename T>
  T scalar(const YAML::Node& parent, const char* key) const {
    auto node = require(parent, key);
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, ErrorKind::Parse, std::string("field '") + key + "' has the wrong type");
    }
  }

  template <typename T>
  T scalar_or(const YAML::Node& parent, const char* key, T fallback) const {
    if (!parent[key]) return fallback;
    return scalar<T>(parent, key);
  }

  OperatingMode mode(const YAML::Node& node) const {
    OperatingMode m;
    m.mode_id = scalar<int>(node, "mode_id");
    m.max_cpu_freq_mhz = scalar<int>(node, "max_cpu_freq_mhz");
    m.online_cpus = scalar<int>(node, "online_cpus");
    auto budget = require(node, "power_budget_w");
    if (budget.IsScalar() && budget.Scalar() == "unbounded") {
      m.power_budget_w.reset();
    } else {
      m.power_budget_w = scalar<double>(node, "power_budget_w");
    }
    return m;
  }

  Worker worker(const YAML::Node& node) const {
    if (!node.IsMap()) fail(node, ErrorKind::Parse, "worker entry must be a mapping");
    Worker w;
    w.worker_id = scalar<std::string>(node, "worker_id");
    try {
      w.arch = parse_arch(scalar<std::string>(node, "arch"));
    } catch (const Error& e) {
      fail(node["arch"], ErrorKind::Parse, e.what());
    }
    w.nominal_power_w = scalar<double>(node, "nominal_power_w");
    w.vcpus = scalar_or<int>(node, "vcpus", 0);
    w.ram_gb = scalar_or<int>(node, "ram_gb", 0);
    auto tuning = require(node, "tuning");
    if (tuning["threads"]) {
      try {
        w.tuning = ThreadScaling{tuning["threads"].as<std::vector<int>>()};
      } catch (const YAML::Exception&) {
        fail(tuning, ErrorKind::Parse, "threads must be a list of integers");
      }
    } else if (tuning["modes"]) {
      ModeSelection ms;
      for (const auto& m : tuning["modes"]) ms.modes.push_back(mode(m));
      w.tuning = std::move(ms);
    } else {
      fail(tuning, ErrorKind::InvalidTuning, "tuning needs 'threads' or 'modes'");
    }
    try {
      check_worker(w);
    } catch (const Error& e) {
      fail(node, e.kind(), e.what());
    }
    return w;
  }

  EngineSpec engine(const YAML::Node& node) const {
    EngineSpec e;
    e.engine_id = scalar<std::string>(node, "engine_id");
    e.task = scalar_or<std::string>(node, "task", "");
    e.backend = scalar_or<std::string>(node, "backend", "");
    e.model_variant = scalar_or<std::string>(node, "model_variant", "");
    e.dataset = scalar_or<std::string>(node, "dataset", "");
    e.accuracy = scalar_or<double>(node, "accuracy", 0.0);
    return e;
  }

 private:
  std::string source_;
};

}  // namespace

Cluster parse_cluster(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorKind::Parse, source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  Reader r(source);
  if (!root.IsMap()) throw Error(ErrorKind::Parse, source + ": document must be a mapping");
  auto workers_node = root["workers"];
  if (!workers_node || !workers_node.IsSequence() || workers_node.size() == 0) {
    throw Error(ErrorKind::EmptyCluster, source + ": no workers listed");
  }
  std::vector<Worker> workers;
  std::set<std::string> ids;
  for (const auto& node : workers_node) {
    auto w = r.worker(node);
    if (!ids.insert(w.worker_id).second) {
      r.fail(node, ErrorKind::DuplicateWorkerId, "worker '" + w.worker_id + "' listed twice");
    }
    workers.push_back(std::move(w));
  }
  std::vector<EngineSpec> engines;
  std::set<std::string> engine_ids;
  for (const auto& node : root["engines"]) {
    auto e = r.engine(node);
    if (!engine_ids.insert(e.engine_id).second) {
      r.fail(node, ErrorKind::DuplicateEngineId, "engine '" + e.engine_id + "' listed twice");
    }
    engines.push_back(std::move(e));
  }
  auto maxn = r.scalar_or<double>(root, "maxn_substitute_w", Cluster::kDefaultMaxnSubstituteW);
  auto q = r.scalar_or<int>(root, "reference_queries", Cluster::kDefaultReferenceQueries);
  return validate_cluster(std::move(workers), std::move(engines), maxn, q);
}

Cluster load_cluster(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open cluster file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_cluster(buf.str(), path.string());
}

std::string dump_cluster(const Cluster& cluster) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "maxn_substitute_w" << YAML::Value << cluster.maxn_substitute_w();
  out << YAML::Key << "reference_queries" << YAML::Value << cluster.reference_queries();
  out << YAML::Key << "workers" << YAML::Value << YAML::BeginSeq;
  for (const auto& w : cluster.workers()) {
    out << YAML::BeginMap;
    out << YAML::Key << "worker_id" << YAML::Value << w.worker_id;
    out << YAML::Key << "arch" << YAML::Value << std::string(to_string(w.arch));
    out << YAML::Key << "nominal_power_w" << YAML::Value << w.nominal_power_w;
    out << YAML::Key << "vcpus" << YAML::Value << w.vcpus;
    out << YAML::Key << "ram_gb" << YAML::Value << w.ram_gb;
    out << YAML::Key << "tuning" << YAML::Value << YAML::BeginMap;
    if (const auto* ts = std::get_if<ThreadScaling>(&w.tuning)) {
      out << YAML::Key << "threads" << YAML::Value << YAML::Flow << ts->levels;
    } else {
      out << YAML::Key << "modes" << YAML::Value << YAML::BeginSeq;
      for (const auto& m : std::get<ModeSelection>(w.tuning).modes) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "mode_id" << YAML::Value << m.mode_id;
        out << YAML::Key << "max_cpu_freq_mhz" << YAML::Value << m.max_cpu_freq_mhz;
        out << YAML::Key << "online_cpus" << YAML::Value << m.online_cpus;
        out << YAML::Key << "power_budget_w" << YAML::Value;
        if (m.power_budget_w) {
          out << *m.power_budget_w;
        } else {
          out << "unbounded";
        }
        out << YAML::EndMap;
      }
      out << YAML::EndSeq;
    }
    out << YAML::EndMap;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "engines" << YAML::Value << YAML::BeginSeq;
  for (const auto& e : cluster.engines()) {
    out << YAML::BeginMap;
    out << YAML::Key << "engine_id" << YAML::Value << e.engine_id;
    out << YAML::Key << "task" << YAML::Value << e.task;
    out << YAML::Key << "backend" << YAML::Value << e.backend;
    out << YAML::Key << "model_variant" << YAML::Value << e.model_variant;
    out << YAML::Key << "dataset" << YAML::Value << e.dataset;
    out << YAML::Key << "accuracy" << YAML::Value << e.accuracy;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void save_cluster(const Cluster& cluster, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write cluster file " + path.string());
  out << dump_cluster(cluster);
}

}  // namespace edgesched
