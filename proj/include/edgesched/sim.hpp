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
#include <string>
#include <vector>

#include "edgesched/scheduler.hpp"
#include "edgesched/workload.hpp"

namespace edgesched {

/// Outcome of one job.
struct JobRecord {
  std::string job_id;
  std::string engine_id;
  double arrival_s = 0.0;
  double start_s = 0.0;
  double finish_s = 0.0;
  std::string worker_id;
  ConfigChoice config = ConfigChoice::threads(1);
  double t_qos_s = 0.0;
  double wait_s = 0.0;
  double e2e_s = 0.0;
  double excess_s = 0.0;
  bool violated = false;

  friend bool operator==(const JobRecord&, const JobRecord&) = default;
};

/// Fills the derived fields (wait, e2e, excess, violated) from the times.
JobRecord make_record(std::string job_id, std::string engine_id, double arrival_s, double start_s,
                      double finish_s, std::string worker_id, ConfigChoice config, double t_qos_s);

struct WorkerEnergy {
  double busy_seconds = 0.0;
  double joules = 0.0;
  friend bool operator==(const WorkerEnergy&, const WorkerEnergy&) = default;
};

/// Busy time and energy per worker. Energy is busy time times the power of
/// the config in use; idle time costs nothing.
class EnergyLedger {
 public:
  EnergyLedger() = default;
  explicit EnergyLedger(const Cluster& cluster);

  void add_interval(const Cluster& cluster, const std::string& worker_id, const ConfigChoice& config,
                    double start_s, double finish_s);
  const std::map<std::string, WorkerEnergy>& workers() const { return workers_; }
  const WorkerEnergy& at(const std::string& worker_id) const { return workers_.at(worker_id); }
  double total_busy_seconds() const;

  friend bool operator==(const EnergyLedger&, const EnergyLedger&) = default;

 private:
  std::map<std::string, WorkerEnergy> workers_;
};

/// Recomputes the ledger from finished jobs (hand check for the simulator).
EnergyLedger ledger_from_records(const Cluster& cluster, const std::vector<JobRecord>& records);

struct SimOptions {
  double tick_s = 5.0;
  /// Multiplicative half-width of the execution-time noise, in [0, 0.5].
  double exec_noise = 0.0;
  std::uint64_t noise_seed = 0;
};

struct SimResult {
  std::string policy;
  /// In trace order.
  std::vector<JobRecord> records;
  EnergyLedger ledger;
  /// Wall-clock seconds spent in each policy decision call. Not deterministic.
  std::vector<double> overhead_s;
  std::size_t decisions = 0;
};

/// Runs `trace` through `scheduler` to completion. Actual durations come
/// from the profile record of the chosen config (the dictionary estimate when
/// there is none), times a seeded noise factor when exec_noise > 0. Throws
/// UnschedulableJob if jobs remain queued with nothing left to happen, and
/// InvariantViolation if the policy breaks strict isolation.
SimResult run(const ArrivalTrace& trace, Scheduler& scheduler, const SimOptions& options = {});

/// Convenience overload building the named policy over the given inputs.
SimResult run(const ArrivalTrace& trace, const Cluster& cluster,
              const ConfigurationDictionary& dictionary, const ProfileTable& profiles,
              std::string_view policy, const SimOptions& options = {});

/// Timeline CSV: `job_id,engine_id,worker_id,config,arrival_s,start_s,finish_s,t_qos_s,violated`.
std::string dump_timeline(const std::vector<JobRecord>& records);

/// Minimum violation count over every plan for at most six jobs: a worker
/// per job and an order per worker, each job starting as soon as it has
/// arrived and its worker is done. Each job runs at the dictionary's config
/// for its worker, as SynergAI would. Throws TooLarge above six jobs.
int brute_force_min_violations(const std::vector<Arrival>& jobs, const SchedContext& ctx);

}  // namespace edgesched
