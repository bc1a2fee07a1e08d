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

#include <optional>
#include <string>
#include <vector>

#include "edgesched/cluster.hpp"
#include "edgesched/profiles.hpp"
#include "edgesched/workload.hpp"

namespace edgesched {

struct QueuedJob {
  JobSpec job;
  double arrival_time_s = 0.0;

  double waiting_s(double now) const { return now - arrival_time_s; }
};

struct WorkerEstimate {
  std::string worker_id;
  ConfigChoice config = ConfigChoice::threads(1);
  double t_estimated_s = 0.0;

  friend bool operator==(const WorkerEstimate&, const WorkerEstimate&) = default;
};

/// T_QoS - T_Waiting. Negative once the deadline has passed in the queue.
double remaining_time(const QueuedJob& job, double now);

/// Preprocessing time plus q / QPS of the dictionary's best config for the
/// job's engine on `worker` (or the worker default for an unprofiled engine).
WorkerEstimate estimate(const JobSpec& job, const Worker& worker,
                        const ConfigurationDictionary& dictionary);

/// Every worker the dictionary can estimate, fastest first; ties by worker id.
std::vector<WorkerEstimate> all_estimates(const JobSpec& job, const Cluster& cluster,
                                          const ConfigurationDictionary& dictionary);

/// Workers whose estimate fits in the remaining time, fastest first.
std::vector<WorkerEstimate> acceptable_workers(const QueuedJob& job, const Cluster& cluster,
                                               const ConfigurationDictionary& dictionary,
                                               double now);

/// The fastest acceptable worker, if any.
std::optional<WorkerEstimate> optimal_worker(const QueuedJob& job, const Cluster& cluster,
                                             const ConfigurationDictionary& dictionary, double now);

/// Slack = remaining time minus the fastest estimate over all workers.
/// Smaller slack means more urgent; negative slack means the deadline cannot
/// be met on any worker. -inf when no worker can be estimated.
double urgency(const QueuedJob& job, const Cluster& cluster,
               const ConfigurationDictionary& dictionary, double now);

}  // namespace edgesched
