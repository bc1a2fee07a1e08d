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
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "edgesched/cluster.hpp"

namespace edgesched {

/// One measured (engine, worker, config) point from offline characterization.
struct ProfileRecord {
  std::string engine_id;
  std::string worker_id;
  ConfigChoice config = ConfigChoice::threads(1);
  double qps = 0.0;
  double preproc_s = 0.0;
  double total_s = 0.0;  ///< preproc_s + reference queries / qps

  friend bool operator==(const ProfileRecord&, const ProfileRecord&) = default;
};

/// The argmax-QPS deployment for one (engine, worker) key.
struct OptimalEntry {
  ConfigChoice config = ConfigChoice::threads(1);
  double qps = 0.0;
  double preproc_s = 0.0;

  friend bool operator==(const OptimalEntry&, const OptimalEntry&) = default;
};

using EngineWorkerKey = std::pair<std::string, std::string>;

/// Offline-phase output: best configuration per (engine, worker), plus the
/// per-worker defaults used for engines that were never profiled.
class ConfigurationDictionary {
 public:
  struct WorkerDefault {
    ConfigChoice config = ConfigChoice::threads(1);
    /// Median qps/preproc of the profiled engines at `config`; empty when the
    /// worker has no profile at that config (new device).
    std::optional<OptimalEntry> estimate;

    friend bool operator==(const WorkerDefault&, const WorkerDefault&) = default;
  };

  const std::map<EngineWorkerKey, OptimalEntry>& entries() const { return entries_; }
  using DefaultMap = std::map<std::string, WorkerDefault, std::less<>>;

  const DefaultMap& defaults() const { return defaults_; }

  const OptimalEntry* find(std::string_view engine_id, std::string_view worker_id) const;
  bool profiles_worker(std::string_view worker_id) const;
  /// Every dictionary entry of one worker, keyed by engine.
  std::vector<std::pair<std::string, OptimalEntry>> worker_entries(std::string_view worker_id) const;
  const WorkerDefault& worker_default(std::string_view worker_id) const;

  /// Dictionary entry, or the worker's default config with its median estimate
  /// when the engine is new on that worker. Empty when neither exists.
  std::optional<OptimalEntry> lookup(std::string_view engine_id, std::string_view worker_id) const;

  friend bool operator==(const ConfigurationDictionary&, const ConfigurationDictionary&) = default;

 private:
  friend ConfigurationDictionary build_dictionary(const std::vector<ProfileRecord>&, const Cluster&);
  friend ConfigurationDictionary dictionary_from_json(const std::string&, const Cluster&);

  std::map<EngineWorkerKey, OptimalEntry> entries_;
  DefaultMap defaults_;
};

/// All profile records indexed by (engine, worker, config); the simulator reads
/// actual execution speed from here for whichever config a policy picks.
class ProfileTable {
 public:
  ProfileTable() = default;
  ProfileTable(const std::vector<ProfileRecord>& records, const Cluster& cluster);

  const ProfileRecord* find(std::string_view engine_id, std::string_view worker_id,
                            const ConfigChoice& config) const;
  const std::vector<ProfileRecord>& records() const { return records_; }

 private:
  std::vector<ProfileRecord> records_;
  std::map<std::tuple<std::string, std::string, ConfigChoice>, std::size_t, std::less<>> index_;
};

/// Throws UnknownWorker / UnknownConfig / InvalidRecord for a record that does
/// not fit the cluster.
void check_record(const ProfileRecord& record, const Cluster& cluster);

/// Selects the maximum-QPS record per (engine, worker). Ties prefer fewer
/// resources (threads or online CPUs), then lower frequency, then lower mode id,
/// so the result does not depend on record order.
ConfigurationDictionary build_dictionary(const std::vector<ProfileRecord>& records,
                                         const Cluster& cluster);

/// True when `a` beats `b` for the same (engine, worker) key.
bool better_record(const ProfileRecord& a, const ProfileRecord& b, const Worker& worker);

/// Configuration to use on `worker` when an engine has no dictionary entry.
///
/// Profiled worker: the config that wins the most dictionary entries (ties go
/// to higher frequency, then fewer CPUs). Unprofiled ARM board: the
/// highest-frequency mode, and among those the one whose core count is
/// nearest the board's second-highest core count. Unprofiled x86: the
/// second-highest thread level.
ConfigChoice default_config(const Worker& worker, const ConfigurationDictionary& dictionary);

/// Default config for a worker that has never been profiled.
ConfigChoice unprofiled_default_config(const Worker& worker);

struct QpsEnvelope {
  double lo = 1.0;
  double hi = 1.0;
};

struct SynthOptions {
  /// Peak-QPS envelopes per worker id; workers not listed fall back by arch.
  std::map<std::string, QpsEnvelope> envelopes = {
      {"x86", {16.5, 259.0}}, {"agx", {5.7, 39.3}}, {"nx", {5.6, 22.0}}};
  QpsEnvelope x86_fallback{16.5, 259.0};
  QpsEnvelope arm_fallback{5.6, 22.0};
  /// Preprocessing time multiplier relative to x86, per worker id.
  std::map<std::string, double> preproc_scale = {{"x86", 1.0}, {"agx", 1.1}, {"nx", 1.76}};
  double arm_preproc_fallback = 1.76;
  /// x86 preprocessing range in seconds (log-uniform).
  double preproc_lo_s = 1.4;
  double preproc_hi_s = 1.4 * 19.0;
  /// Mean speedup over one thread at 2, 4, 8 threads.
  std::vector<double> thread_speedups = {1.0, 1.6, 2.5, 3.8};
  /// Target mean speedup at the top thread level over all engines.
  double top_speedup = 4.5;
  /// Share of engines whose throughput saturates at the second-highest level.
  double saturating_share = 0.6;
  /// QPS ~ freq^freq_exponent * cpus^cpu_exponent on ARM boards.
  double freq_exponent = 1.39;
  double cpu_exponent = 0.25;
  /// Multiplicative per-record jitter half-width.
  double jitter = 0.05;
};

/// Deterministic synthetic characterization: one record per (engine, worker,
/// config). x86 throughput is non-decreasing in threads with concave gains;
/// ARM throughput is non-decreasing in mode frequency; preprocessing time is
/// constant across the configs of one worker.
std::vector<ProfileRecord> synth_profiles(const Cluster& cluster,
                                          const std::vector<EngineSpec>& engines,
                                          std::uint64_t seed,
                                          const SynthOptions& options = {});

/// CSV with header `engine_id,worker_id,config,qps,preproc_s,total_s`.
std::string dump_profiles(const std::vector<ProfileRecord>& records);
/// Parses the CSV and checks every row against the cluster; errors name the
/// offending line.
std::vector<ProfileRecord> parse_profiles(const std::string& text, const Cluster& cluster,
                                          const std::string& source = "<profiles>");
std::vector<ProfileRecord> load_profiles(const std::filesystem::path& path, const Cluster& cluster);
void save_profiles(const std::vector<ProfileRecord>& records, const std::filesystem::path& path);

std::string dictionary_to_json(const ConfigurationDictionary& dictionary);
ConfigurationDictionary dictionary_from_json(const std::string& text, const Cluster& cluster);

}  // namespace edgesched
