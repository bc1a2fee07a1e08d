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

#include "edgesched/baselines.hpp"

#include <algorithm>
#include <limits>

namespace edgesched {

std::string_view to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::SynergAI: return "synergai";
    case PolicyKind::RR: return "rr";
    case PolicyKind::SRR: return "srr";
    case PolicyKind::LRU: return "lru";
    case PolicyKind::MRU: return "mru";
    case PolicyKind::BE: return "be";
    case PolicyKind::SloMael: return "slo-mael";
  }
  return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
  for (auto kind : all_policies()) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorKind::Parse, "unknown policy '" + std::string(name) + "'");
}

const std::vector<PolicyKind>& all_policies() {
  static const std::vector<PolicyKind> kinds = {PolicyKind::SynergAI, PolicyKind::RR,  PolicyKind::SRR,
                                                PolicyKind::LRU,      PolicyKind::MRU, PolicyKind::BE,
                                                PolicyKind::SloMael};
  return kinds;
}

const std::vector<PolicyKind>& simple_baselines() {
  static const std::vector<PolicyKind> kinds = {PolicyKind::RR, PolicyKind::SRR, PolicyKind::LRU,
                                                PolicyKind::MRU, PolicyKind::BE};
  return kinds;
}

ConfigChoice baseline_config(const Worker& worker, const ConfigurationDictionary& dictionary) {
  if (const auto* ts = std::get_if<ThreadScaling>(&worker.tuning)) {
    return ConfigChoice::threads(ts->levels.back());
  }
  return dictionary.worker_default(worker.worker_id).config;
}

FixedConfigScheduler::FixedConfigScheduler(SchedContext ctx) : Scheduler(ctx) {
  for (const auto& w : cluster().workers()) configs_.emplace(w.worker_id, baseline_config(w, dictionary()));
}

const ConfigChoice& FixedConfigScheduler::config_for(const std::string& worker_id) const {
  return configs_.at(worker_id);
}

double FixedConfigScheduler::duration(const QueuedJob& job, const std::string& worker_id) const {
  return execution_time(job.job, cluster().worker(worker_id), config_for(worker_id), ctx_);
}

Assignment FixedConfigScheduler::assign_fixed(std::size_t index, const std::string& worker_id) {
  double d = duration(state_.queue[index], worker_id);
  return assign(index, worker_id, config_for(worker_id), d);
}

std::vector<Assignment> RoundRobinScheduler::decide() {
  std::vector<Assignment> out;
  const auto& workers = cluster().workers();
  while (!state_.queue.empty()) {
    std::optional<std::size_t> chosen;
    for (std::size_t k = 0; k < workers.size(); ++k) {
      auto idx = (cursor_ + k) % workers.size();
      if (state_.is_free(workers[idx].worker_id)) {
        chosen = idx;
        break;
      }
    }
    if (!chosen) break;
    out.push_back(assign_fixed(0, workers[*chosen].worker_id));
    cursor_ = (*chosen + 1) % workers.size();
  }
  return out;
}

void StrictRoundRobinScheduler::on_arrival(const QueuedJob& job) {
  const auto& workers = cluster().workers();
  designated_[job.job.job_id] = workers[cursor_].worker_id;
  cursor_ = (cursor_ + 1) % workers.size();
}

std::vector<Assignment> StrictRoundRobinScheduler::decide() {
  std::vector<Assignment> out;
  std::size_t i = 0;
  while (i < state_.queue.size()) {
    const auto& worker = designated_.at(state_.queue[i].job.job_id);
    if (state_.is_free(worker)) {
      out.push_back(assign_fixed(i, worker));
    } else {
      ++i;
    }
  }
  return out;
}

RecencyScheduler::RecencyScheduler(SchedContext ctx, bool most_recent)
    : FixedConfigScheduler(ctx), most_recent_(most_recent) {
  for (const auto& w : cluster().workers()) last_activity_[w.worker_id] = 0.0;
}

void RecencyScheduler::on_freed(const std::string& worker_id) {
  last_activity_[worker_id] = std::max(last_activity_[worker_id], state_.now);
}

std::vector<Assignment> RecencyScheduler::decide() {
  std::vector<Assignment> out;
  while (!state_.queue.empty()) {
    const std::string* best = nullptr;
    // last_activity_ iterates in worker-id order, so strict comparisons keep
    // the lowest id on ties.
    for (const auto& [id, t] : last_activity_) {
      if (!state_.is_free(id)) continue;
      if (best == nullptr) {
        best = &id;
        continue;
      }
      double bt = last_activity_.at(*best);
      if (most_recent_ ? t > bt : t < bt) best = &id;
    }
    if (best == nullptr) break;
    out.push_back(assign_fixed(0, *best));
  }
  return out;
}

BestEffortScheduler::BestEffortScheduler(SchedContext ctx, std::vector<std::string> strength_order)
    : FixedConfigScheduler(ctx), order_(std::move(strength_order)) {
  if (order_.empty()) {
    for (const auto& w : cluster().workers()) order_.push_back(w.worker_id);
  }
  for (const auto& id : order_) cluster().worker(id);
  if (order_.size() != cluster().size()) {
    throw Error(ErrorKind::UnknownWorker, "strength order must list every worker once");
  }
}

std::vector<Assignment> BestEffortScheduler::decide() {
  std::vector<Assignment> out;
  while (!state_.queue.empty()) {
    auto it = std::find_if(order_.begin(), order_.end(),
                           [&](const std::string& id) { return state_.is_free(id); });
    if (it == order_.end()) break;
    out.push_back(assign_fixed(0, *it));
  }
  return out;
}

MappingScore best_mapping(const std::vector<JobSpec>& jobs, const std::map<std::string, double>& backlog_s,
                          const SchedContext& ctx, std::size_t max_jobs) {
  if (jobs.size() > max_jobs) {
    throw Error(ErrorKind::TooLarge, std::to_string(jobs.size()) + " jobs exceed the enumeration cap of " +
                                         std::to_string(max_jobs));
  }
  std::vector<std::string> ids;
  for (const auto& w : ctx.cluster->workers()) ids.push_back(w.worker_id);
  std::sort(ids.begin(), ids.end());
  const auto n_jobs = jobs.size();
  const auto n_workers = ids.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> est(n_jobs, std::vector<double>(n_workers, kInf));
  std::vector<double> base(n_workers, 0.0);
  for (std::size_t w = 0; w < n_workers; ++w) {
    const auto& worker = ctx.cluster->worker(ids[w]);
    auto config = baseline_config(worker, *ctx.dictionary);
    if (auto it = backlog_s.find(ids[w]); it != backlog_s.end()) base[w] = it->second;
    for (std::size_t j = 0; j < n_jobs; ++j) {
      try {
        est[j][w] = execution_time(jobs[j], worker, config, ctx);
      } catch (const Error&) {
        est[j][w] = kInf;
      }
    }
  }

  MappingScore best;
  best.mean_latency_s = kInf;
  if (n_jobs == 0) {
    best.mean_latency_s = 0.0;
    return best;
  }
  std::vector<std::size_t> choice(n_jobs, 0);
  std::vector<double> load(n_workers);
  while (true) {
    std::copy(base.begin(), base.end(), load.begin());
    double total = 0.0;
    for (std::size_t j = 0; j < n_jobs; ++j) {
      auto w = choice[j];
      load[w] += est[j][w];
      total += load[w];
    }
    double score = total / static_cast<double>(n_jobs);
    if (score < best.mean_latency_s || best.workers.empty()) {
      best.mean_latency_s = score;
      best.workers.clear();
      for (auto w : choice) best.workers.push_back(ids[w]);
    }
    std::size_t pos = n_jobs;
    while (pos > 0) {
      --pos;
      if (++choice[pos] < n_workers) break;
      choice[pos] = 0;
      if (pos == 0) return best;
    }
  }
}

std::optional<std::string> SloMaelScheduler::committed_worker(const std::string& job_id) const {
  auto it = committed_to_.find(job_id);
  if (it == committed_to_.end()) return std::nullopt;
  return it->second;
}

void SloMaelScheduler::on_arrival(const QueuedJob& job) { uncommitted_.push_back(job.job.job_id); }

std::map<std::string, double> SloMaelScheduler::backlog() const {
  std::map<std::string, double> out;
  for (const auto& w : cluster().workers()) {
    double b = 0.0;
    if (auto until = state_.busy_until.at(w.worker_id)) b = std::max(0.0, *until - state_.now);
    if (auto it = committed_.find(w.worker_id); it != committed_.end()) {
      for (const auto& job_id : it->second) {
        auto q = std::find_if(state_.queue.begin(), state_.queue.end(),
                              [&](const QueuedJob& j) { return j.job.job_id == job_id; });
        b += duration(*q, w.worker_id);
      }
    }
    out[w.worker_id] = b;
  }
  return out;
}

std::vector<Assignment> SloMaelScheduler::decide() {
  auto find_job = [&](const std::string& job_id) {
    auto it = std::find_if(state_.queue.begin(), state_.queue.end(),
                           [&](const QueuedJob& j) { return j.job.job_id == job_id; });
    return static_cast<std::size_t>(it - state_.queue.begin());
  };

  while (!uncommitted_.empty()) {
    std::vector<JobSpec> window;
    for (std::size_t k = 0; k < uncommitted_.size() && k < kEnumerationCap; ++k) {
      window.push_back(state_.queue[find_job(uncommitted_[k])].job);
    }
    auto mapping = best_mapping(window, backlog(), ctx_, kEnumerationCap);
    const auto& head = uncommitted_.front();
    committed_[mapping.workers.front()].push_back(head);
    committed_to_[head] = mapping.workers.front();
    uncommitted_.erase(uncommitted_.begin());
  }

  std::vector<Assignment> out;
  for (auto& [worker, fifo] : committed_) {
    if (fifo.empty() || !state_.is_free(worker)) continue;
    auto idx = find_job(fifo.front());
    fifo.pop_front();
    out.push_back(assign_fixed(idx, worker));
  }
  return out;
}

std::unique_ptr<Scheduler> make_scheduler(PolicyKind kind, SchedContext ctx, const PolicyOptions& options) {
  switch (kind) {
    case PolicyKind::SynergAI: return std::make_unique<SynergAIScheduler>(ctx);
    case PolicyKind::RR: return std::make_unique<RoundRobinScheduler>(ctx);
    case PolicyKind::SRR: return std::make_unique<StrictRoundRobinScheduler>(ctx);
    case PolicyKind::LRU: return std::make_unique<RecencyScheduler>(ctx, false);
    case PolicyKind::MRU: return std::make_unique<RecencyScheduler>(ctx, true);
    case PolicyKind::BE: return std::make_unique<BestEffortScheduler>(ctx, options.strength_order);
    case PolicyKind::SloMael: return std::make_unique<SloMaelScheduler>(ctx);
  }
  throw Error(ErrorKind::Parse, "unknown policy");
}

}  // namespace edgesched
