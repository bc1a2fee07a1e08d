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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>

#include "edgesched/cluster_io.hpp"
#include "edgesched/experiment.hpp"
#include "edgesched/oracle.hpp"

using namespace edgesched;

namespace {

constexpr int kValidationFailure = 2;
constexpr int kInvariantFailure = 3;

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "1,2,5-8" -> 1 2 5 6 7 8
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(text)) {
    try {
      auto dash = item.find('-', 1);
      if (dash == std::string::npos) {
        out.push_back(std::stoull(item));
        continue;
      }
      auto lo = std::stoull(item.substr(0, dash));
      auto hi = std::stoull(item.substr(dash + 1));
      if (hi < lo) throw Error(ErrorKind::Parse, "empty seed range '" + item + "'");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::Parse, "bad seed '" + item + "'");
    }
  }
  return out;
}

Cluster cluster_from(const std::string& path) { return path.empty() ? default_cluster() : load_cluster(path); }

std::vector<ProfileRecord> records_from(const std::string& source, const Cluster& cluster, std::uint64_t seed) {
  auto ps = ProfileSource::parse(source);
  switch (ps.kind) {
    case ProfileSource::Kind::File: return load_profiles(ps.path, cluster);
    case ProfileSource::Kind::SynthFixed: return synth_profiles(cluster, cluster.engines(), ps.seed);
    case ProfileSource::Kind::SynthPerSeed: return synth_profiles(cluster, cluster.engines(), seed);
  }
  return {};
}

void emit(const std::string& out, const std::string& content) {
  if (out.empty() || out == "-") {
    std::cout << content;
  } else {
    write_file(out, content);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deadline-aware inference scheduling simulator"};
  app.require_subcommand(1);

  std::string cluster_path;
  std::string out;

  auto* synth = app.add_subcommand("synth-profiles", "Generate synthetic profile records (CSV)");
  std::uint64_t synth_seed = 0;
  synth->add_option("--cluster", cluster_path, "Cluster YAML (default: built-in cluster)");
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--out", out, "Output file, '-' for stdout");

  auto* dict = app.add_subcommand("build-dict", "Build the configuration dictionary (JSON)");
  std::string dict_profiles;
  dict->add_option("--cluster", cluster_path, "Cluster YAML");
  dict->add_option("--profiles", dict_profiles, "Profile CSV")->required();
  dict->add_option("--out", out, "Output file, '-' for stdout");

  auto* runc = app.add_subcommand("run", "Simulate regimes x policies x seeds and write reports");
  std::string config_path, profiles, regimes, policies, seeds;
  double tick = 0.0, noise = 0.0, maxn = 0.0;
  int q = 0, n_jobs = 0;
  unsigned threads = 0;
  bool timing = false;
  runc->add_option("--config", config_path, "Experiment YAML; flags override it");
  auto* o_cluster = runc->add_option("--cluster", cluster_path, "Cluster YAML");
  auto* o_profiles = runc->add_option("--profiles", profiles, "synth | synth:<seed> | <csv path>");
  auto* o_regimes = runc->add_option("--regimes", regimes, "Comma list, e.g. DL-FL,DH-FH");
  auto* o_policies = runc->add_option("--policies", policies, "Comma list of policies");
  auto* o_seeds = runc->add_option("--seeds", seeds, "Comma list or ranges, e.g. 1-20");
  auto* o_tick = runc->add_option("--tick", tick, "Re-evaluation period in seconds");
  auto* o_noise = runc->add_option("--noise", noise, "Execution-time noise half-width in [0, 0.5]");
  auto* o_out = runc->add_option("--out", out, "Output directory");
  auto* o_q = runc->add_option("--q", q, "Queries per job");
  auto* o_maxn = runc->add_option("--maxn", maxn, "Watts charged for unbounded power modes");
  auto* o_jobs = runc->add_option("--n-jobs", n_jobs, "Jobs per trace");
  auto* o_threads = runc->add_option("--threads", threads, "Parallel runs (0 = hardware)");
  runc->add_flag("--timing", timing, "Record wall-clock decision overhead (output no longer reproducible)");

  auto* cmp = app.add_subcommand("compare", "Recompute comparisons from a run directory");
  std::string run_dir;
  cmp->add_option("dir", run_dir, "Directory written by 'run'")->required();
  cmp->add_option("--cluster", cluster_path, "Cluster YAML used for the run");

  auto* oracle = app.add_subcommand("oracle-check", "SynergAI against exhaustive search on small instances");
  std::string oracle_profiles = "synth:0", oracle_dict;
  std::size_t instances = 500, max_jobs = 6;
  std::uint64_t oracle_seed = 0;
  double floor = 0.6, oracle_tick = 5.0;
  oracle->add_option("--cluster", cluster_path, "Cluster YAML");
  oracle->add_option("--profiles", oracle_profiles, "synth:<seed> | <csv path>");
  oracle->add_option("--dict", oracle_dict, "Dictionary JSON (default: built from the profiles)");
  oracle->add_option("--instances", instances, "Number of instances");
  oracle->add_option("--max-jobs", max_jobs, "Jobs per instance, at most 6");
  oracle->add_option("--seed", oracle_seed, "Instance seed");
  oracle->add_option("--floor", floor, "Minimum share of instances where SynergAI matches the optimum");
  oracle->add_option("--tick", oracle_tick, "Re-evaluation period in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kValidationFailure;
  }

  try {
    if (*synth) {
      auto cluster = cluster_from(cluster_path);
      emit(out, dump_profiles(synth_profiles(cluster, cluster.engines(), synth_seed)));
    } else if (*dict) {
      auto cluster = cluster_from(cluster_path);
      emit(out, dictionary_to_json(build_dictionary(load_profiles(dict_profiles, cluster), cluster)));
    } else if (*runc) {
      ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_experiment_config(config_path);
      if (*o_cluster) config.cluster_path = cluster_path;
      if (*o_profiles) config.profiles = ProfileSource::parse(profiles);
      if (*o_regimes) config.regimes = split(regimes);
      if (*o_policies) {
        config.policies.clear();
        for (const auto& p : split(policies)) config.policies.push_back(parse_policy(p));
      }
      if (*o_seeds) config.seeds = parse_seeds(seeds);
      if (*o_tick) config.tick_s = tick;
      if (*o_noise) config.exec_noise = noise;
      if (*o_out) config.out_dir = out;
      if (*o_q) config.q = q;
      if (*o_maxn) config.maxn_substitute_w = maxn;
      if (*o_jobs) config.n_jobs = n_jobs;
      if (*o_threads) config.threads = threads;
      if (timing) config.timing = true;
      auto result = run_experiment(config);
      write_experiment(result, config.out_dir);
      std::cout << result.reports.size() << " reports and " << result.summary.regimes.size()
                << " comparisons written to " << config.out_dir.string() << "\n";
    } else if (*cmp) {
      auto summary = compare(load_reports(run_dir), edge_workers(cluster_from(cluster_path)));
      write_comparisons(summary, run_dir);
      std::cout << summary.regimes.size() << " comparisons written to " << run_dir << "\n";
    } else if (*oracle) {
      auto cluster = cluster_from(cluster_path);
      auto records = records_from(oracle_profiles, cluster, oracle_seed);
      auto dictionary = oracle_dict.empty() ? build_dictionary(records, cluster)
                                            : dictionary_from_json(read_file(oracle_dict), cluster);
      auto check = oracle_check(cluster, records, dictionary, instances, max_jobs, oracle_seed, oracle_tick);
      std::printf("instances %zu  matched optimum %zu (%.1f%%)  synergai violations %ld  optimum %ld  max gap %d\n",
                  check.instances, check.equal, 100.0 * check.equal_fraction(), check.synergai_violations,
                  check.oracle_violations, check.max_gap);
      if (check.dominance_failures > 0) {
        std::printf("FAIL: SynergAI beat the exhaustive optimum on %zu instances\n", check.dominance_failures);
        return kInvariantFailure;
      }
      if (check.equal_fraction() < floor) {
        std::printf("FAIL: matched share below the floor of %.1f%%\n", 100.0 * floor);
        return kInvariantFailure;
      }
      std::printf("PASS\n");
    }
  } catch (const Error& e) {
    std::cerr << "edgesched: " << e.what() << "\n";
    bool invariant = e.kind() == ErrorKind::InvariantViolation || e.kind() == ErrorKind::UnschedulableJob;
    return invariant ? kInvariantFailure : kValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "edgesched: " << e.what() << "\n";
    return kValidationFailure;
  }
  return 0;
}
