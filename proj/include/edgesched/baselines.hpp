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

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "edgesched/scheduler.hpp"

namespace edgesched {

enum class PolicyKind { SynergAI, RR, SRR, LRU, MRU, BE, SloMael };

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy(std::string_view name);
/// All seven policies, SynergAI first.
const std::vector<PolicyKind>& all_policies();
/// The five rule-based comparison policies (RR, SRR, LRU, MRU, BE).
const std::vector<PolicyKind>& simple_baselines();

/// Configuration a baseline runs on `worker` for every job: the top thread
/// level on x86, the dictionary's default mode on ARM.
ConfigChoice baseline_config(const Worker& worker, const ConfigurationDictionary& dictionary);

/// Shared machinery: FIFO queue, fixed per-worker configuration.
class FixedConfigScheduler : public Scheduler {
 public:
  explicit FixedConfigScheduler(SchedContext ctx);

 protected:
  const ConfigChoice& config_for(const std::string& worker_id) const;
  double duration(const QueuedJob& job, const std::string& worker_id) const;
  Assignment assign_fixed(std::size_t index, const std::string& worker_id);

 private:
  std::map<std::string, ConfigChoice> configs_;
};

/// Round robin: the rotation skips busy workers within one event.
class RoundRobinScheduler final : public FixedConfigScheduler {
 public:
  using FixedConfigScheduler::FixedConfigScheduler;
  std::string_view name() const override { return "rr"; }
  std::size_t cursor() const { return cursor_; }

 protected:
  std::vector<Assignment> decide() override;

 private:
  std::size_t cursor_ = 0;
};

/// Strict round robin: each job is designated the next worker in rotation at
/// arrival and waits for it, even while other workers idle.
class StrictRoundRobinScheduler final : public FixedConfigScheduler {
 public:
  using FixedConfigScheduler::FixedConfigScheduler;
  std::string_view name() const override { return "srr"; }
  const std::string& designated(const std::string& job_id) const { return designated_.at(job_id); }

 protected:
  void on_arrival(const QueuedJob& job) override;
  std::vector<Assignment> decide() override;

 private:
  std::size_t cursor_ = 0;
  std::map<std::string, std::string> designated_;
};

/// Least / most recently used: among free workers, the one whose last job
/// finished earliest (LRU) or latest (MRU). Fresh workers start at t = 0;
/// ties go to the lowest worker id.
class RecencyScheduler final : public FixedConfigScheduler {
 public:
  RecencyScheduler(SchedContext ctx, bool most_recent);
  std::string_view name() const override { return most_recent_ ? "mru" : "lru"; }
  double last_activity(const std::string& worker_id) const { return last_activity_.at(worker_id); }

 protected:
  void on_freed(const std::string& worker_id) override;
  std::vector<Assignment> decide() override;

 private:
  bool most_recent_;
  std::map<std::string, double> last_activity_;
};

/// Best effort: the first free worker in a static strength order.
class BestEffortScheduler final : public FixedConfigScheduler {
 public:
  /// Empty `strength_order` means cluster order.
  BestEffortScheduler(SchedContext ctx, std::vector<std::string> strength_order = {});
  std::string_view name() const override { return "be"; }

 protected:
  std::vector<Assignment> decide() override;

 private:
  std::vector<std::string> order_;
};

/// Scores job-to-worker mappings by average expected latency.
struct MappingScore {
  std::vector<std::string> workers;  ///< worker per job, in job order
  double mean_latency_s = 0.0;
};

/// Exhaustive search over every mapping of `jobs` to the cluster's workers.
/// A job's latency is the projected wait on its worker (`backlog_s` plus the
/// estimates of earlier jobs mapped there) plus its own estimate under the
/// worker's baseline config. Ties go to the lexicographically smallest worker
/// ids. Throws TooLarge above `max_jobs`.
MappingScore best_mapping(const std::vector<JobSpec>& jobs, const std::map<std::string, double>& backlog_s,
                          const SchedContext& ctx, std::size_t max_jobs = 6);

/// Minimum-average-expected-latency placement without model slicing. On each
/// arrival the uncommitted jobs (up to six at a time) are scored over all
/// mappings and the head job is committed to its worker; commitments are
/// never revisited.
class SloMaelScheduler final : public FixedConfigScheduler {
 public:
  static constexpr std::size_t kEnumerationCap = 6;

  using FixedConfigScheduler::FixedConfigScheduler;
  std::string_view name() const override { return "slo-mael"; }
  /// Worker a job was committed to, if any.
  std::optional<std::string> committed_worker(const std::string& job_id) const;

 protected:
  void on_arrival(const QueuedJob& job) override;
  std::vector<Assignment> decide() override;

 private:
  std::map<std::string, double> backlog() const;

  std::vector<std::string> uncommitted_;
  std::map<std::string, std::deque<std::string>> committed_;
  std::map<std::string, std::string> committed_to_;
};

struct PolicyOptions {
  /// Best-effort strength order (worker ids); empty means cluster order.
  std::vector<std::string> strength_order;
};

std::unique_ptr<Scheduler> make_scheduler(PolicyKind kind, SchedContext ctx,
                                          const PolicyOptions& options = {});

}  // namespace edgesched
