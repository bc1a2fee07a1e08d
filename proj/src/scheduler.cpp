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

#include "edgesched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace edgesched {
namespace {

Assignment commit(SchedulerState& state, std::size_t index, const std::string& worker_id,
                  const ConfigChoice& config, double duration_s) {
  auto job = std::move(state.queue[index]);
  state.queue.erase(state.queue.begin() + static_cast<std::ptrdiff_t>(index));
  double finish = state.now + duration_s;
  state.busy_until[worker_id] = finish;
  return {job.job.job_id, worker_id, config, state.now, finish};
}

}  // namespace

bool SchedulerState::is_free(const std::string& worker_id) const {
  auto it = busy_until.find(worker_id);
  return it != busy_until.end() && !it->second.has_value();
}

std::size_t SchedulerState::free_count() const {
  return static_cast<std::size_t>(std::count_if(
      busy_until.begin(), busy_until.end(), [](const auto& kv) { return !kv.second.has_value(); }));
}

double execution_time(const JobSpec& job, const Worker& worker, const ConfigChoice& config,
                      const SchedContext& ctx) {
  if (ctx.profiles != nullptr) {
    if (const auto* r = ctx.profiles->find(job.engine_id, worker.worker_id, config)) {
      return r->preproc_s + job.q / r->qps;
    }
  }
  auto entry = ctx.dictionary->lookup(job.engine_id, worker.worker_id);
  if (!entry) {
    throw Error(ErrorKind::NoEntryAndNoDefault,
                "no performance data for '" + job.engine_id + "' on '" + worker.worker_id + "'");
  }
  return entry->preproc_s + job.q / entry->qps;
}

Scheduler::Scheduler(SchedContext ctx) : ctx_(ctx) {
  for (const auto& w : ctx_.cluster->workers()) state_.busy_until[w.worker_id] = std::nullopt;
}

std::vector<Assignment> Scheduler::on_event(const SchedEvent& event) {
  if (event.time_s < state_.now) {
    throw Error(ErrorKind::ClockRegression, "event at " + std::to_string(event.time_s) +
                                                " precedes scheduler clock " + std::to_string(state_.now));
  }
  state_.now = event.time_s;
  for (auto& [id, until] : state_.busy_until) {
    if (until && *until < state_.now) until = state_.now;
  }
  switch (event.kind) {
    case SchedEvent::Kind::Arrival:
      state_.queue.push_back(*event.job);
      on_arrival(*event.job);
      break;
    case SchedEvent::Kind::WorkerFreed: {
      auto it = state_.busy_until.find(event.worker_id);
      if (it == state_.busy_until.end()) {
        throw Error(ErrorKind::UnknownWorker, "freed unknown worker '" + event.worker_id + "'");
      }
      it->second.reset();
      on_freed(event.worker_id);
      break;
    }
    case SchedEvent::Kind::Tick:
      break;
  }
  return decide();
}

Assignment Scheduler::assign(std::size_t index, const std::string& worker_id,
                             const ConfigChoice& config, double duration_s) {
  return commit(state_, index, worker_id, config, duration_s);
}

void reorder_queue(SchedulerState& state, const Cluster& cluster,
                   const ConfigurationDictionary& dictionary) {
  struct Keyed {
    bool hopeless;
    double slack;
    QueuedJob job;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(state.queue.size());
  for (auto& job : state.queue) {
    double slack = urgency(job, cluster, dictionary, state.now);
    bool hopeless = slack < 0.0 && acceptable_workers(job, cluster, dictionary, state.now).empty();
    keyed.push_back({hopeless, slack, std::move(job)});
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.hopeless, a.slack, a.job.arrival_time_s, a.job.job.job_id) <
           std::tie(b.hopeless, b.slack, b.job.arrival_time_s, b.job.job.job_id);
  });
  state.queue.clear();
  for (auto& k : keyed) state.queue.push_back(std::move(k.job));
}

std::vector<Assignment> dispatch(SchedulerState& state, const Cluster& cluster,
                                 const ConfigurationDictionary& dictionary) {
  std::vector<Assignment> out;
  std::size_t i = 0;
  while (i < state.queue.size() && state.free_count() > 0) {
    const auto& job = state.queue[i];
    auto candidates = acceptable_workers(job, cluster, dictionary, state.now);
    if (candidates.empty()) candidates = all_estimates(job.job, cluster, dictionary);
    auto pick = std::find_if(candidates.begin(), candidates.end(),
                             [&](const WorkerEstimate& e) { return state.is_free(e.worker_id); });
    if (pick == candidates.end()) {
      ++i;
      continue;
    }
    out.push_back(commit(state, i, pick->worker_id, pick->config, pick->t_estimated_s));
  }
  return out;
}

std::vector<Assignment> SynergAIScheduler::decide() {
  reorder_queue(state_, cluster(), dictionary());
  return dispatch(state_, cluster(), dictionary());
}

}  // namespace edgesched
