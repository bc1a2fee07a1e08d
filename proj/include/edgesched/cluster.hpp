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
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "edgesched/error.hpp"

namespace edgesched {

/// A runtime-switchable power mode of an ARM board.
struct OperatingMode {
  int mode_id = 0;
  int max_cpu_freq_mhz = 0;
  int online_cpus = 0;
  /// Watts; std::nullopt means the board runs without a fixed cap (MAXN).
  std::optional<double> power_budget_w;

  bool unbounded() const { return !power_budget_w.has_value(); }
  friend bool operator==(const OperatingMode&, const OperatingMode&) = default;
};

struct ThreadScaling {
  std::vector<int> levels;
  friend bool operator==(const ThreadScaling&, const ThreadScaling&) = default;
};

struct ModeSelection {
  std::vector<OperatingMode> modes;
  friend bool operator==(const ModeSelection&, const ModeSelection&) = default;
};

using TuningAxis = std::variant<ThreadScaling, ModeSelection>;

enum class Arch { X86, Arm };

std::string_view to_string(Arch arch);
Arch parse_arch(std::string_view text);

/// One point on a worker's tuning axis: a thread count or an operating mode.
class ConfigChoice {
 public:
  enum class Kind : std::uint8_t { Threads, Mode };

  static ConfigChoice threads(int n) { return ConfigChoice(Kind::Threads, n); }
  static ConfigChoice mode(int mode_id) { return ConfigChoice(Kind::Mode, mode_id); }

  /// Parses "threads:8" or "mode:6".
  static ConfigChoice parse(std::string_view text);

  Kind kind() const { return kind_; }
  int value() const { return value_; }
  bool is_threads() const { return kind_ == Kind::Threads; }
  bool is_mode() const { return kind_ == Kind::Mode; }

  std::string to_string() const;

  friend bool operator==(const ConfigChoice&, const ConfigChoice&) = default;
  friend auto operator<=>(const ConfigChoice&, const ConfigChoice&) = default;

 private:
  ConfigChoice(Kind kind, int value) : kind_(kind), value_(value) {}

  Kind kind_;
  int value_;
};

struct Worker {
  std::string worker_id;
  Arch arch = Arch::X86;
  TuningAxis tuning;
  double nominal_power_w = 0.0;
  int vcpus = 0;
  int ram_gb = 0;

  bool has_config(const ConfigChoice& config) const;
  /// Every config on the tuning axis, in axis order.
  std::vector<ConfigChoice> configs() const;
  /// Throws UnknownConfig when `config` is not a mode of this worker.
  const OperatingMode& mode(int mode_id) const;

  friend bool operator==(const Worker&, const Worker&) = default;
};

struct EngineSpec {
  std::string engine_id;
  std::string task;
  std::string backend;
  std::string model_variant;
  std::string dataset;
  double accuracy = 0.0;

  friend bool operator==(const EngineSpec&, const EngineSpec&) = default;
};

/// Validated, immutable set of workers plus the engine catalogue and the
/// experiment-wide constants that live with the cluster description.
class Cluster {
 public:
  static constexpr double kDefaultMaxnSubstituteW = 30.0;
  static constexpr int kDefaultReferenceQueries = 1024;

  Cluster() = default;

  const std::vector<Worker>& workers() const { return workers_; }
  const std::vector<EngineSpec>& engines() const { return engines_; }
  double maxn_substitute_w() const { return maxn_substitute_w_; }
  int reference_queries() const { return reference_queries_; }

  std::size_t size() const { return workers_.size(); }
  const Worker& worker(std::string_view worker_id) const;
  const Worker* find_worker(std::string_view worker_id) const;
  std::size_t index_of(std::string_view worker_id) const;
  const EngineSpec* find_engine(std::string_view engine_id) const;

  Cluster with_maxn_substitute(double watts) const;
  Cluster with_reference_queries(int q) const;

  friend bool operator==(const Cluster&, const Cluster&) = default;

 private:
  friend Cluster validate_cluster(std::vector<Worker>, std::vector<EngineSpec>,
                                  double, int);

  std::vector<Worker> workers_;
  std::vector<EngineSpec> engines_;
  double maxn_substitute_w_ = kDefaultMaxnSubstituteW;
  int reference_queries_ = kDefaultReferenceQueries;
};

/// Throws InvalidTuning when one worker's own invariants fail.
void check_worker(const Worker& worker);

/// Checks every worker, tuning axis and engine invariant and returns the
/// validated cluster. Worker order is preserved; it is the cluster order used
/// by rotation-based policies.
Cluster validate_cluster(std::vector<Worker> workers,
                         std::vector<EngineSpec> engines = {},
                         double maxn_substitute_w = Cluster::kDefaultMaxnSubstituteW,
                         int reference_queries = Cluster::kDefaultReferenceQueries);

/// Power drawn while `worker` runs a job in `config`. ARM boards report the
/// mode budget (MAXN maps to the cluster's substitute); x86 reports the
/// worker's nominal power regardless of thread count.
double nominal_power(const Cluster& cluster, const Worker& worker,
                     const ConfigChoice& config);

/// Testbed described in the evaluation: a 16-vCPU x86 VM, a Jetson AGX with six
/// runtime modes and a Xavier NX with nine, plus the twelve MLPerf engines.
Cluster default_cluster();

}  // namespace edgesched
