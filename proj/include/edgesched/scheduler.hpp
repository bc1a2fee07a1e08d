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

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edgesched/cluster.hpp"
#include "edgesched/estimator.hpp"
#include "edgesched/profiles.hpp"

namespace edgesched {

/// Binding of a job to a worker and configuration, emitted by a policy.
struct Assignment {
  std::string job_id;
  std::string worker_id;
  ConfigChoice config = ConfigChoice::threads(1);
  double start_s = 0.0;
  double expected_finish_s = 0.0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct SchedulerState {
  std::vector<QueuedJob> queue;
  /// Expected finish of the running job, or std::nullopt when the worker is free.
  std::map<std::string, std::optional<double>> busy_until;
  double now = 0.0;

  bool is_free(const std::string& worker_id) const;
  std::size_t free_count() const;
};

struct SchedEvent {
  enum class Kind { Arrival, WorkerFreed, Tick };

  Kind kind = Kind::Tick;
  double time_s = 0.0;
  std::optional<QueuedJob> job;  ///< set for Arrival
  std::string worker_id;         ///< set for WorkerFreed

  static SchedEvent arrival(double t, JobSpec job) {
    return {Kind::Arrival, t, QueuedJob{std::move(job), t}, {}};
  }
  static SchedEvent worker_freed(double t, std::string worker_id) {
    return {Kind::WorkerFreed, t, std::nullopt, std::move(worker_id)};
  }
  static SchedEvent tick(double t) { return {Kind::Tick, t, std::nullopt, {}}; }
};

/// What a policy may consult: the cluster, the offline dictionary, and the
/// full profile table (for policies that run fixed, non-optimal configs).
struct SchedContext {
  const Cluster* cluster = nullptr;
  const ConfigurationDictionary* dictionary = nullptr;
  const ProfileTable* profiles = nullptr;
};

/// Execution time of `job` on `worker` in `config`: the profiled record when
/// present, otherwise the dictionary's estimate for that worker.
double execution_time(const JobSpec& job, const Worker& worker, const ConfigChoice& config,
                      const SchedContext& ctx);

/// Event-driven scheduling policy. All state changes go through on_event,
/// which advances the clock, applies the event, then lets the policy decide.
class Scheduler {
 public:
  explicit Scheduler(SchedContext ctx);
  virtual ~Scheduler() = default;

  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  virtual std::string_view name() const = 0;
  /// Whether periodic ticks can change this policy's decisions.
  virtual bool wants_ticks() const { return false; }

  std::vector<Assignment> on_event(const SchedEvent& event);

  const SchedulerState& state() const { return state_; }
  const SchedContext& context() const { return ctx_; }

 protected:
  virtual void on_arrival(const QueuedJob& /*job*/) {}
  virtual void on_freed(const std::string& /*worker_id*/) {}
  virtual std::vector<Assignment> decide() = 0;

  /// Removes queue[index], marks the worker busy and returns the assignment.
  Assignment assign(std::size_t index, const std::string& worker_id, const ConfigChoice& config,
                    double duration_s);

  const Cluster& cluster() const { return *ctx_.cluster; }
  const ConfigurationDictionary& dictionary() const { return *ctx_.dictionary; }

  SchedContext ctx_;
  SchedulerState state_;
};

/// Urgency ordering: non-negative slack ascending, then jobs that cannot meet
/// their deadline on any worker at the tail (slack ascending among them).
/// Ties break by arrival time, then job id.
void reorder_queue(SchedulerState& state, const Cluster& cluster,
                   const ConfigurationDictionary& dictionary);

/// Single pass over the ordered queue: each job takes the first free worker
/// of its acceptable list (or of all workers, fastest first, when nothing is
/// acceptable). Jobs without a free candidate stay queued.
std::vector<Assignment> dispatch(SchedulerState& state, const Cluster& cluster,
                                 const ConfigurationDictionary& dictionary);

/// Architecture-aware, urgency-ordered policy driven by the configuration
/// dictionary.
class SynergAIScheduler final : public Scheduler {
 public:
  using Scheduler::Scheduler;

  std::string_view name() const override { return "synergai"; }
  bool wants_ticks() const override { return true; }

 protected:
  std::vector<Assignment> decide() override;
};

}  // namespace edgesched
