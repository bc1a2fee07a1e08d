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

#include "edgesched/estimator.hpp"

#include <algorithm>
#include <limits>

namespace edgesched {

double remaining_time(const QueuedJob& job, double now) {
  if (now < job.arrival_time_s) {
    throw Error(ErrorKind::ClockRegression, "job '" + job.job.job_id + "' evaluated before it arrived");
  }
  return job.job.t_qos_s - job.waiting_s(now);
}

WorkerEstimate estimate(const JobSpec& job, const Worker& worker,
                        const ConfigurationDictionary& dictionary) {
  auto entry = dictionary.lookup(job.engine_id, worker.worker_id);
  if (!entry) {
    throw Error(ErrorKind::NoEntryAndNoDefault,
                "no estimate for '" + job.engine_id + "' on '" + worker.worker_id + "'");
  }
  return {worker.worker_id, entry->config, entry->preproc_s + job.q / entry->qps};
}

std::vector<WorkerEstimate> all_estimates(const JobSpec& job, const Cluster& cluster,
                                          const ConfigurationDictionary& dictionary) {
  std::vector<WorkerEstimate> out;
  for (const auto& w : cluster.workers()) {
    if (!dictionary.lookup(job.engine_id, w.worker_id)) continue;
    out.push_back(estimate(job, w, dictionary));
  }
  std::sort(out.begin(), out.end(), [](const WorkerEstimate& a, const WorkerEstimate& b) {
    if (a.t_estimated_s != b.t_estimated_s) return a.t_estimated_s < b.t_estimated_s;
    return a.worker_id < b.worker_id;
  });
  return out;
}

std::vector<WorkerEstimate> acceptable_workers(const QueuedJob& job, const Cluster& cluster,
                                               const ConfigurationDictionary& dictionary,
                                               double now) {
  double remaining = remaining_time(job, now);
  auto all = all_estimates(job.job, cluster, dictionary);
  std::erase_if(all, [&](const WorkerEstimate& e) { return !(remaining >= e.t_estimated_s); });
  return all;
}

std::optional<WorkerEstimate> optimal_worker(const QueuedJob& job, const Cluster& cluster,
                                             const ConfigurationDictionary& dictionary, double now) {
  auto acceptable = acceptable_workers(job, cluster, dictionary, now);
  if (acceptable.empty()) return std::nullopt;
  return acceptable.front();
}

double urgency(const QueuedJob& job, const Cluster& cluster,
               const ConfigurationDictionary& dictionary, double now) {
  double remaining = remaining_time(job, now);
  auto all = all_estimates(job.job, cluster, dictionary);
  if (all.empty()) return -std::numeric_limits<double>::infinity();
  return remaining - all.front().t_estimated_s;
}

}  // namespace edgesched
