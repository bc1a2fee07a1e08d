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

#include "edgesched/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "edgesched/cluster_io.hpp"
#include "edgesched/stats.hpp"

namespace edgesched {
namespace {

const std::vector<std::string> kRegimes = {"DL-FL", "DL-FH", "DH-FH", "DH-FL"};

[[noreturn]] void config_error(const std::string& source, const YAML::Node& node, const std::string& why) {
  auto mark = node.Mark();
  std::string where = mark.is_null() ? source + ": " : source + ":" + std::to_string(mark.line + 1) + ": ";
  throw Error(ErrorKind::Parse, where + why);
}

template <typename T>
T as(const std::string& source, const YAML::Node& node, const char* key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    config_error(source, node, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

ProfileSource ProfileSource::parse(std::string_view text) {
  ProfileSource s;
  if (text == "synth") return s;
  if (text.starts_with("synth:")) {
    s.kind = Kind::SynthFixed;
    try {
      s.seed = std::stoull(std::string(text.substr(6)));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "bad synthetic profile seed in '" + std::string(text) + "'");
    }
    return s;
  }
  s.kind = Kind::File;
  s.path = std::string(text.starts_with("file:") ? text.substr(5) : text);
  return s;
}

std::string ProfileSource::to_string() const {
  switch (kind) {
    case Kind::SynthPerSeed: return "synth";
    case Kind::SynthFixed: return "synth:" + std::to_string(seed);
    case Kind::File: return "file:" + path.string();
  }
  return "synth";
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::Parse, source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  ExperimentConfig c;
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) config_error(source, root, "expected a mapping");
  for (const auto& kv : root) {
    auto key = kv.first.as<std::string>();
    const auto& v = kv.second;
    if (key == "cluster") {
      c.cluster_path = as<std::string>(source, v, "cluster");
    } else if (key == "profiles") {
      c.profiles = ProfileSource::parse(as<std::string>(source, v, "profiles"));
    } else if (key == "regimes") {
      c.regimes = as<std::vector<std::string>>(source, v, "regimes");
    } else if (key == "policies") {
      c.policies.clear();
      for (const auto& p : as<std::vector<std::string>>(source, v, "policies")) {
        try {
          c.policies.push_back(parse_policy(p));
        } catch (const Error&) {
          config_error(source, v, "unknown policy '" + p + "'");
        }
      }
    } else if (key == "seeds") {
      c.seeds = as<std::vector<std::uint64_t>>(source, v, "seeds");
    } else if (key == "tick_s") {
      c.tick_s = as<double>(source, v, "tick_s");
    } else if (key == "exec_noise") {
      c.exec_noise = as<double>(source, v, "exec_noise");
    } else if (key == "q") {
      c.q = as<int>(source, v, "q");
    } else if (key == "maxn_substitute_w") {
      c.maxn_substitute_w = as<double>(source, v, "maxn_substitute_w");
    } else if (key == "n_jobs") {
      c.n_jobs = as<int>(source, v, "n_jobs");
    } else if (key == "strength_order") {
      c.strength_order = as<std::vector<std::string>>(source, v, "strength_order");
    } else if (key == "out") {
      c.out_dir = as<std::string>(source, v, "out");
    } else if (key == "timing") {
      c.timing = as<bool>(source, v, "timing");
    } else if (key == "threads") {
      c.threads = as<unsigned>(source, v, "threads");
    } else {
      config_error(source, kv.first, "unknown key '" + key + "'");
    }
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_file(path), path.string());
}

void check_experiment_config(const ExperimentConfig& c) {
  auto bad = [](const std::string& why) { throw Error(ErrorKind::InvalidRecord, why); };
  if (c.regimes.empty()) bad("no regimes selected");
  if (c.policies.empty()) bad("no policies selected");
  if (c.seeds.empty()) bad("no seeds selected");
  for (const auto& r : c.regimes) {
    if (std::find(kRegimes.begin(), kRegimes.end(), r) == kRegimes.end()) bad("unknown regime '" + r + "'");
  }
  if (!(c.tick_s > 0.0)) bad("tick must be positive");
  if (!(c.exec_noise >= 0.0 && c.exec_noise <= 0.5)) bad("exec noise must lie in [0, 0.5]");
  if (c.q && *c.q < 1) bad("q must be at least 1");
  if (c.maxn_substitute_w && !(*c.maxn_substitute_w > 0.0)) bad("MAXN substitute must be positive");
  if (c.n_jobs < 1) bad("n_jobs must be at least 1");
}

std::uint64_t trace_seed(const std::string& regime, std::uint64_t seed) {
  auto it = std::find(kRegimes.begin(), kRegimes.end(), regime);
  return mix_seed(seed, 1 + static_cast<std::uint64_t>(it - kRegimes.begin()));
}

Scenario make_scenario(const Cluster& cluster, std::vector<ProfileRecord> records, const std::string& regime,
                       std::uint64_t seed, int n_jobs) {
  Scenario s;
  s.regime = ExperimentRegime::parse(regime, n_jobs, trace_seed(regime, seed));
  s.records = std::move(records);
  s.table = ProfileTable(s.records, cluster);
  s.dictionary = build_dictionary(s.records, cluster);
  s.lambda = derive_lambda(s.records, s.regime.frequency);
  s.trace = gen_trace(s.regime, cluster.engines(), s.records, cluster.reference_queries(), s.lambda);
  return s;
}

RunReport run_policy(const Scenario& scenario, const Cluster& cluster, PolicyKind policy, const SimOptions& sim,
                     const PolicyOptions& options, bool timing) {
  auto scheduler = make_scheduler(policy, SchedContext{&cluster, &scenario.dictionary, &scenario.table}, options);
  auto result = run(scenario.trace, *scheduler, sim);
  auto report = aggregate(result.records, result.ledger, timing ? result.overhead_s : std::vector<double>{});
  report.policy = std::string(to_string(policy));
  report.regime = scenario.regime.name();
  return report;
}

std::vector<std::string> edge_workers(const Cluster& cluster) {
  std::vector<std::string> out;
  for (const auto& w : cluster.workers()) {
    if (w.arch == Arch::Arm) out.push_back(w.worker_id);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  check_experiment_config(config);
  ExperimentResult result;
  result.cluster = config.cluster_path.empty() ? default_cluster() : load_cluster(config.cluster_path);
  if (config.maxn_substitute_w) result.cluster = result.cluster.with_maxn_substitute(*config.maxn_substitute_w);
  if (config.q) result.cluster = result.cluster.with_reference_queries(*config.q);
  const Cluster& cluster = result.cluster;

  std::vector<ProfileRecord> file_records;
  if (config.profiles.kind == ProfileSource::Kind::File) {
    file_records = load_profiles(config.profiles.path, cluster);
  } else if (config.profiles.kind == ProfileSource::Kind::SynthFixed) {
    file_records = synth_profiles(cluster, cluster.engines(), config.profiles.seed);
  }

  std::vector<Scenario> scenarios;
  for (const auto& regime : config.regimes) {
    for (auto seed : config.seeds) {
      auto records = config.profiles.kind == ProfileSource::Kind::SynthPerSeed
                         ? synth_profiles(cluster, cluster.engines(), seed)
                         : file_records;
      scenarios.push_back(make_scenario(cluster, std::move(records), regime, seed, config.n_jobs));
    }
  }

  const std::size_t n_policies = config.policies.size();
  const std::size_t n_tasks = scenarios.size() * n_policies;
  std::vector<RunReport> reports(n_tasks);
  std::vector<std::exception_ptr> errors(n_tasks);
  SimOptions sim{config.tick_s, config.exec_noise, 0};
  PolicyOptions options{config.strength_order};

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < n_tasks; t = next++) {
      const auto& scenario = scenarios[t / n_policies];
      auto seed = config.seeds[(t / n_policies) % config.seeds.size()];
      try {
        SimOptions s = sim;
        s.noise_seed = mix_seed(scenario.regime.seed, t % n_policies);
        reports[t] = run_policy(scenario, cluster, config.policies[t % n_policies], s, options, config.timing);
        reports[t].seed = seed;
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  unsigned n_threads = config.threads != 0 ? config.threads : std::max(1U, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_tasks));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  result.reports = std::move(reports);
  result.summary = compare(result.reports, edge_workers(cluster));
  return result;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
}

void write_comparisons(const ComparisonSummary& summary, const std::filesystem::path& out_dir) {
  for (const auto& cmp : summary.regimes) {
    write_file(out_dir / "comparisons" / (cmp.regime + ".csv"), comparison_table(cmp));
  }
  write_file(out_dir / "summary.json", summary_to_json(summary));
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& out_dir) {
  for (const auto& r : result.reports) {
    auto stem = std::filesystem::path(r.regime) / r.policy / ("seed-" + std::to_string(r.seed));
    write_file(out_dir / "reports" / stem.concat(".json"), report_to_json(r));
    auto timeline = std::filesystem::path(r.regime) / r.policy / ("seed-" + std::to_string(r.seed) + ".csv");
    write_file(out_dir / "timelines" / timeline, dump_timeline(r.records));
  }
  write_comparisons(result.summary, out_dir);
}

std::vector<RunReport> load_reports(const std::filesystem::path& dir) {
  auto root = dir / "reports";
  if (!std::filesystem::is_directory(root)) throw Error(ErrorKind::Io, "no reports under " + dir.string());
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<RunReport> out;
  for (const auto& p : paths) out.push_back(report_from_json(read_file(p)));
  return out;
}

}  // namespace edgesched
