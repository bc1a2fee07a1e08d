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

#include "edgesched/oracle.hpp"

#include <algorithm>
#include <cstdio>

#include "edgesched/scheduler.hpp"
#include "edgesched/stats.hpp"

namespace edgesched {

ArrivalTrace gen_small_instance(const Cluster& cluster, const std::vector<ProfileRecord>& records,
                                std::size_t max_jobs, std::uint64_t seed) {
  if (cluster.engines().empty()) throw Error(ErrorKind::EmptyProfileSet, "cluster lists no engines");
  Rng rng(seed);
  auto n = static_cast<std::size_t>(1 + rng.below(std::max<std::size_t>(max_jobs, 1)));
  auto demand = rng.uniform() < 0.5 ? Demand::Low : Demand::High;
  auto frequency = rng.uniform() < 0.5 ? Frequency::Low : Frequency::High;
  double lambda = derive_lambda(records, frequency);

  ArrivalTrace trace;
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t += rng.exponential(lambda);
    const auto& engine = cluster.engines()[rng.below(cluster.engines().size())];
    std::vector<ProfileRecord> mine;
    std::copy_if(records.begin(), records.end(), std::back_inserter(mine),
                 [&](const ProfileRecord& r) { return r.engine_id == engine.engine_id; });
    char id[32];
    std::snprintf(id, sizeof id, "J%02zu", i + 1);
    trace.arrivals.push_back(
        {t, JobSpec{id, engine.engine_id, cluster.reference_queries(), derive_demand(mine, demand)}});
  }
  return trace;
}

OracleCheck oracle_check(const Cluster& cluster, const std::vector<ProfileRecord>& records,
                         const ConfigurationDictionary& dictionary, std::size_t instances,
                         std::size_t max_jobs, std::uint64_t seed, double tick_s) {
  if (max_jobs > 6) {
    throw Error(ErrorKind::TooLarge, std::to_string(max_jobs) + " jobs per instance exceed the oracle limit of 6");
  }
  ProfileTable table(records, cluster);
  SchedContext ctx{&cluster, &dictionary, &table};
  OracleCheck out;
  for (std::size_t i = 0; i < instances; ++i) {
    auto trace = gen_small_instance(cluster, records, max_jobs, mix_seed(seed, i));
    int best = brute_force_min_violations(trace.arrivals, ctx);
    SynergAIScheduler scheduler(ctx);
    auto result = run(trace, scheduler, SimOptions{tick_s, 0.0, 0});
    int got = static_cast<int>(std::count_if(result.records.begin(), result.records.end(),
                                             [](const JobRecord& r) { return r.violated; }));
    ++out.instances;
    out.synergai_violations += got;
    out.oracle_violations += best;
    if (got == best) ++out.equal;
    if (got < best) ++out.dominance_failures;
    out.max_gap = std::max(out.max_gap, got - best);
  }
  return out;
}

}  // namespace edgesched
