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

#include "edgesched/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <fmt/format.h>

#include "edgesched/baselines.hpp"
#include "edgesched/stats.hpp"

namespace edgesched {
namespace {

// Lower rank runs first at equal times.
enum class EventRank : int { Completion = 0, Arrival = 1, Tick = 2 };

struct PendingEvent {
  double time_s;
  EventRank rank;
  std::string key;  // job id; empty for ticks
  std::size_t job_index;
  std::string worker_id;
};

struct Later {
  bool operator()(const PendingEvent& a, const PendingEvent& b) const {
    return std::tie(a.time_s, a.rank, a.key) > std::tie(b.time_s, b.rank, b.key);
  }
};

double next_tick(double now, double tick_s) {
  double t = (std::floor(now / tick_s) + 1.0) * tick_s;
  return t > now ? t : t + tick_s;
}

}  // namespace

JobRecord make_record(std::string job_id, std::string engine_id, double arrival_s, double start_s,
                      double finish_s, std::string worker_id, ConfigChoice config, double t_qos_s) {
  JobRecord r;
  r.job_id = std::move(job_id);
  r.engine_id = std::move(engine_id);
  r.arrival_s = arrival_s;
  r.start_s = start_s;
  r.finish_s = finish_s;
  r.worker_id = std::move(worker_id);
  r.config = config;
  r.t_qos_s = t_qos_s;
  r.wait_s = start_s - arrival_s;
  r.e2e_s = finish_s - arrival_s;
  r.excess_s = std::max(0.0, r.e2e_s - t_qos_s);
  r.violated = r.e2e_s > t_qos_s;
  return r;
}

EnergyLedger::EnergyLedger(const Cluster& cluster) {
  for (const auto& w : cluster.workers()) workers_[w.worker_id] = {};
}

void EnergyLedger::add_interval(const Cluster& cluster, const std::string& worker_id,
                                const ConfigChoice& config, double start_s, double finish_s) {
  if (finish_s < start_s) {
    throw Error(ErrorKind::InvariantViolation, "interval on '" + worker_id + "' ends before it starts");
  }
  const auto& worker = cluster.worker(worker_id);
  auto& slot = workers_[worker_id];
  double busy = finish_s - start_s;
  slot.busy_seconds += busy;
  slot.joules += busy * nominal_power(cluster, worker, config);
}

double EnergyLedger::total_busy_seconds() const {
  double total = 0.0;
  for (const auto& [id, e] : workers_) total += e.busy_seconds;
  return total;
}

EnergyLedger ledger_from_records(const Cluster& cluster, const std::vector<JobRecord>& records) {
  EnergyLedger ledger(cluster);
  for (const auto& r : records) ledger.add_interval(cluster, r.worker_id, r.config, r.start_s, r.finish_s);
  return ledger;
}

SimResult run(const ArrivalTrace& trace, Scheduler& scheduler, const SimOptions& options) {
  check_trace(trace);
  if (!(options.tick_s > 0.0)) throw Error(ErrorKind::InvalidRecord, "tick must be positive");
  if (!(options.exec_noise >= 0.0 && options.exec_noise <= 0.5)) {
    throw Error(ErrorKind::InvalidRecord, "exec noise must lie in [0, 0.5]");
  }
  const auto& ctx = scheduler.context();
  const Cluster& cluster = *ctx.cluster;

  SimResult result;
  result.policy = std::string(scheduler.name());
  result.ledger = EnergyLedger(cluster);

  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < trace.size(); ++i) index_of[trace.arrivals[i].job.job_id] = i;
  std::vector<std::optional<JobRecord>> done(trace.size());
  std::vector<bool> started(trace.size(), false);
  std::map<std::string, std::optional<std::size_t>> running;
  for (const auto& w : cluster.workers()) running[w.worker_id] = std::nullopt;

  std::priority_queue<PendingEvent, std::vector<PendingEvent>, Later> heap;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& a = trace.arrivals[i];
    heap.push({a.arrival_time_s, EventRank::Arrival, a.job.job_id, i, {}});
  }
  bool tick_pending = false;
  std::size_t in_flight = 0;
  std::size_t arrived = 0;

  while (!heap.empty()) {
    auto ev = heap.top();
    heap.pop();
    SchedEvent sched_event;
    switch (ev.rank) {
      case EventRank::Arrival:
        ++arrived;
        sched_event = SchedEvent::arrival(ev.time_s, trace.arrivals[ev.job_index].job);
        break;
      case EventRank::Completion: {
        running[ev.worker_id].reset();
        --in_flight;
        sched_event = SchedEvent::worker_freed(ev.time_s, ev.worker_id);
        break;
      }
      case EventRank::Tick:
        tick_pending = false;
        sched_event = SchedEvent::tick(ev.time_s);
        break;
    }

    auto t0 = std::chrono::steady_clock::now();
    auto assignments = scheduler.on_event(sched_event);
    auto t1 = std::chrono::steady_clock::now();
    result.overhead_s.push_back(std::chrono::duration<double>(t1 - t0).count());
    ++result.decisions;

    for (const auto& as : assignments) {
      auto it = index_of.find(as.job_id);
      if (it == index_of.end() || started[it->second]) {
        throw Error(ErrorKind::InvariantViolation, "policy assigned unknown or started job '" + as.job_id + "'");
      }
      auto slot = running.find(as.worker_id);
      if (slot == running.end() || slot->second.has_value()) {
        throw Error(ErrorKind::InvariantViolation, "policy assigned '" + as.job_id + "' to busy or unknown worker '" +
                                                       as.worker_id + "'");
      }
      const auto& worker = cluster.worker(as.worker_id);
      if (!worker.has_config(as.config) || as.start_s != ev.time_s) {
        throw Error(ErrorKind::InvariantViolation, "malformed assignment for '" + as.job_id + "'");
      }
      std::size_t idx = it->second;
      const auto& arrival = trace.arrivals[idx];
      double duration = execution_time(arrival.job, worker, as.config, ctx);
      if (options.exec_noise > 0.0) {
        Rng noise(mix_seed(options.noise_seed, idx));
        duration *= noise.uniform(1.0 - options.exec_noise, 1.0 + options.exec_noise);
      }
      double finish = ev.time_s + duration;
      started[idx] = true;
      slot->second = idx;
      ++in_flight;
      done[idx] = make_record(arrival.job.job_id, arrival.job.engine_id, arrival.arrival_time_s, ev.time_s,
                              finish, as.worker_id, as.config, arrival.job.t_qos_s);
      result.ledger.add_interval(cluster, as.worker_id, as.config, ev.time_s, finish);
      heap.push({finish, EventRank::Completion, as.job_id, idx, as.worker_id});
    }

    bool queued = !scheduler.state().queue.empty();
    if (queued && ev.rank == EventRank::Tick && assignments.empty() && in_flight == 0 &&
        arrived == trace.size()) {
      throw Error(ErrorKind::UnschedulableJob,
                  "job '" + scheduler.state().queue.front().job.job_id + "' can never be placed");
    }
    if (queued && scheduler.wants_ticks() && !tick_pending) {
      heap.push({next_tick(ev.time_s, options.tick_s), EventRank::Tick, {}, 0, {}});
      tick_pending = true;
    }
  }

  if (!scheduler.state().queue.empty()) {
    throw Error(ErrorKind::UnschedulableJob,
                "job '" + scheduler.state().queue.front().job.job_id + "' left queued after the last event");
  }
  for (std::size_t i = 0; i < done.size(); ++i) {
    if (!done[i]) throw Error(ErrorKind::InvariantViolation, "job '" + trace.arrivals[i].job.job_id + "' lost");
    result.records.push_back(std::move(*done[i]));
  }
  return result;
}

SimResult run(const ArrivalTrace& trace, const Cluster& cluster, const ConfigurationDictionary& dictionary,
              const ProfileTable& profiles, std::string_view policy, const SimOptions& options) {
  auto scheduler = make_scheduler(parse_policy(policy), SchedContext{&cluster, &dictionary, &profiles});
  return run(trace, *scheduler, options);
}

std::string dump_timeline(const std::vector<JobRecord>& records) {
  std::ostringstream out;
  out << "job_id,engine_id,worker_id,config,arrival_s,start_s,finish_s,t_qos_s,violated\n";
  for (const auto& r : records) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", r.job_id, r.engine_id, r.worker_id, r.config.to_string(),
                       r.arrival_s, r.start_s, r.finish_s, r.t_qos_s, r.violated ? 1 : 0);
  }
  return out.str();
}

int brute_force_min_violations(const std::vector<Arrival>& jobs, const SchedContext& ctx) {
  constexpr std::size_t kMaxJobs = 6;
  if (jobs.size() > kMaxJobs) {
    throw Error(ErrorKind::TooLarge, std::to_string(jobs.size()) + " jobs exceed the oracle limit of 6");
  }
  const auto n = jobs.size();
  const auto& workers = ctx.cluster->workers();
  const std::size_t full = (std::size_t{1} << n) - 1;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr int kNever = std::numeric_limits<int>::max() / 4;

  // best[w][S]: fewest violations when worker w runs exactly the jobs in S in
  // the best order. Every order of every subset is a prefix walk of a DFS.
  std::vector<std::vector<int>> best(workers.size(), std::vector<int>(full + 1, kNever));
  for (std::size_t w = 0; w < workers.size(); ++w) {
    std::vector<double> dur(n, kInf);
    for (std::size_t j = 0; j < n; ++j) {
      if (auto entry = ctx.dictionary->lookup(jobs[j].job.engine_id, workers[w].worker_id)) {
        dur[j] = execution_time(jobs[j].job, workers[w], entry->config, ctx);
      }
    }
    auto& table = best[w];
    table[0] = 0;
    auto dfs = [&](auto&& self, std::size_t set, double avail, int violations) -> void {
      for (std::size_t j = 0; j < n; ++j) {
        if ((set >> j) & 1U || dur[j] == kInf) continue;
        double start = std::max(avail, jobs[j].arrival_time_s);
        double finish = start + dur[j];
        int v = violations + (finish - jobs[j].arrival_time_s > jobs[j].job.t_qos_s ? 1 : 0);
        std::size_t next = set | (std::size_t{1} << j);
        table[next] = std::min(table[next], v);
        self(self, next, finish, v);
      }
    };
    dfs(dfs, 0, 0.0, 0);
  }

  // Combine: split the job set over the workers.
  std::vector<int> acc(full + 1, kNever);
  acc[0] = 0;
  for (std::size_t w = 0; w < workers.size(); ++w) {
    std::vector<int> next(full + 1, kNever);
    for (std::size_t s = 0; s <= full; ++s) {
      if (acc[s] >= kNever) continue;
      std::size_t rest = full & ~s;
      for (std::size_t sub = rest;; sub = (sub - 1) & rest) {
        if (best[w][sub] < kNever) next[s | sub] = std::min(next[s | sub], acc[s] + best[w][sub]);
        if (sub == 0) break;
      }
    }
    acc = std::move(next);
  }
  if (acc[full] >= kNever) {
    throw Error(ErrorKind::NoEntryAndNoDefault, "some job cannot be estimated on any worker");
  }
  return acc[full];
}

}  // namespace edgesched
