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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edgesched/baselines.hpp"
#include "edgesched/metrics.hpp"
#include "edgesched/sim.hpp"

namespace edgesched {

/// Where profile records come from: a CSV file, fresh synthetic profiles per
/// run seed, or one synthetic set shared by every seed.
struct ProfileSource {
  enum class Kind { File, SynthPerSeed, SynthFixed };
  Kind kind = Kind::SynthPerSeed;
  std::filesystem::path path;
  std::uint64_t seed = 0;

  /// "synth", "synth:<seed>" or "file:<path>"; any other text is a path.
  static ProfileSource parse(std::string_view text);
  std::string to_string() const;
};

struct ExperimentConfig {
  /// Empty means the built-in cluster.
  std::filesystem::path cluster_path;
  ProfileSource profiles;
  std::vector<std::string> regimes = {"DL-FL", "DL-FH", "DH-FH"};
  std::vector<PolicyKind> policies = all_policies();
  std::vector<std::uint64_t> seeds = {1};
  double tick_s = 5.0;
  double exec_noise = 0.0;
  std::optional<int> q;
  std::optional<double> maxn_substitute_w;
  int n_jobs = 24;
  std::vector<std::string> strength_order;
  std::filesystem::path out_dir = "out";
  /// Include wall-clock overhead in the reports (breaks byte-identity).
  bool timing = false;
  /// Worker threads for independent runs; 0 picks the hardware count.
  unsigned threads = 0;
};

/// Reads the YAML experiment file. Keys mirror the struct fields.
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Throws InvalidRecord on empty regimes, policies or seeds, or bad numbers.
void check_experiment_config(const ExperimentConfig& config);

/// Everything one (regime, seed) pair shares across policies.
struct Scenario {
  ExperimentRegime regime;
  std::vector<ProfileRecord> records;
  ProfileTable table;
  ConfigurationDictionary dictionary;
  double lambda = 0.0;
  ArrivalTrace trace;
};

/// Seed of the arrival trace for one regime and run seed.
std::uint64_t trace_seed(const std::string& regime, std::uint64_t seed);

Scenario make_scenario(const Cluster& cluster, std::vector<ProfileRecord> records, const std::string& regime,
                       std::uint64_t seed, int n_jobs);

/// Simulates one policy on a scenario and aggregates the run.
RunReport run_policy(const Scenario& scenario, const Cluster& cluster, PolicyKind policy, const SimOptions& sim,
                     const PolicyOptions& options = {}, bool timing = false);

struct ExperimentResult {
  Cluster cluster;
  /// Ordered by regime, then seed, then policy as configured.
  std::vector<RunReport> reports;
  ComparisonSummary summary;
};

/// Runs every (regime, policy, seed) triple, in parallel across triples.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// ARM workers, whose energy the comparison reports.
std::vector<std::string> edge_workers(const Cluster& cluster);

/// Writes reports/<regime>/<policy>/seed-<n>.json, timelines/ (same layout,
/// CSV), comparisons/<regime>.csv and summary.json under `out_dir`.
void write_experiment(const ExperimentResult& result, const std::filesystem::path& out_dir);

/// Reads every report under `<dir>/reports` in path order.
std::vector<RunReport> load_reports(const std::filesystem::path& dir);

/// Writes comparisons/<regime>.csv and summary.json for `summary`.
void write_comparisons(const ComparisonSummary& summary, const std::filesystem::path& out_dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace edgesched
