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

#include <doctest.h>

#include <algorithm>
#include <map>
#include <functional>
#include <numeric>
#include <random>

#include "edgesched/baselines.hpp"
#include "edgesched/sim.hpp"
#include "helpers.hpp"

using namespace edgesched;
using testing::timed;

namespace {

struct Setup {
  Cluster cluster;
  ConfigurationDictionary dict;
  ProfileTable table;
  Setup(Cluster c, std::vector<ProfileRecord> records)
      : cluster(std::move(c)), dict(build_dictionary(records, cluster)), table(records, cluster) {}
  SchedContext ctx() const { return {&cluster, &dict, &table}; }
};

ArrivalTrace make_trace(std::vector<std::tuple<double, std::string, std::string, double>> rows, int q = 100) {
  ArrivalTrace t;
  for (auto& [at, id, engine, qos] : rows) t.arrivals.push_back({at, JobSpec{id, engine, q, qos}});
  return t;
}

// Independent minimum: every global priority order times every worker
// vector; each worker serves its jobs in priority order.
int enumerate_min_violations(const std::vector<Arrival>& jobs, const Cluster& c,
                             const std::function<double(std::size_t, std::size_t)>& dur) {
  const std::size_t n = jobs.size();
  const std::size_t m = c.workers().size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  int best = static_cast<int>(n) + 1;
  do {
    std::size_t plans = 1;
    for (std::size_t i = 0; i < n; ++i) plans *= m;
    for (std::size_t code = 0; code < plans; ++code) {
      std::vector<std::size_t> w(n);
      std::size_t x = code;
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = x % m;
        x /= m;
      }
      std::vector<double> avail(m, 0.0);
      int v = 0;
      for (std::size_t k : order) {
        double start = std::max(avail[w[k]], jobs[k].arrival_time_s);
        double finish = start + dur(k, w[k]);
        avail[w[k]] = finish;
        v += finish - jobs[k].arrival_time_s > jobs[k].job.t_qos_s;
      }
      best = std::min(best, v);
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

TEST_CASE("single job finishes at arrival plus preprocessing plus q over qps") {
  auto c = testing::flat_cluster(1);
  Setup s(c, {testing::rec("e", "w1", "threads:2", 50, 2, 100)});
  auto t = make_trace({{3, "j", "e", 100}});
  for (auto kind : all_policies()) {
    auto sch = make_scheduler(kind, s.ctx());
    auto res = run(t, *sch);
    REQUIRE(res.records.size() == 1);
    CHECK(res.records[0].start_s == 3);
    CHECK(res.records[0].finish_s == doctest::Approx(7).epsilon(1e-12));
    CHECK(res.records[0].wait_s == 0);
    CHECK_FALSE(res.records[0].violated);
  }
}

TEST_CASE("two jobs on one worker run back to back") {
  Setup s(testing::flat_cluster(1), {timed("e", "w1", "threads:2", 10)});
  auto t = make_trace({{0, "a", "e", 15}, {0, "b", "e", 15}});
  for (auto kind : all_policies()) {
    auto sch = make_scheduler(kind, s.ctx());
    auto res = run(t, *sch);
    std::vector<double> finishes = {res.records[0].finish_s, res.records[1].finish_s};
    std::sort(finishes.begin(), finishes.end());
    CHECK(finishes[0] == doctest::Approx(10));
    CHECK(finishes[1] == doctest::Approx(20));
    CHECK(res.records[0].violated + res.records[1].violated == 1);
  }
}

TEST_CASE("record fields are derived from the times") {
  auto r = make_record("j", "e", 2, 5, 30, "w", ConfigChoice::threads(1), 20);
  CHECK(r.wait_s == 3);
  CHECK(r.e2e_s == 28);
  CHECK(r.excess_s == 8);
  CHECK(r.violated);
  auto ok = make_record("j", "e", 2, 5, 22, "w", ConfigChoice::threads(1), 20);
  CHECK(ok.excess_s == 0);
  CHECK_FALSE(ok.violated);
}

TEST_CASE("runs are deterministic, conserve jobs and keep workers disjoint") {
  auto c = default_cluster();
  auto records = synth_profiles(c, c.engines(), 12);
  Setup s(c, records);
  for (const char* name : {"DL-FL", "DH-FH"}) {
    auto regime = ExperimentRegime::parse(name, 30, 8);
    auto trace = gen_trace(regime, c.engines(), records, 1024, derive_lambda(records, regime.frequency));
    for (auto kind : all_policies()) {
      SimOptions opt;
      opt.exec_noise = 0.1;
      opt.noise_seed = 4;
      auto a = run(trace, s.cluster, s.dict, s.table, to_string(kind), opt);
      auto b = run(trace, s.cluster, s.dict, s.table, to_string(kind), opt);
      CHECK(a.records == b.records);
      CHECK(a.ledger == b.ledger);
      REQUIRE(a.records.size() == trace.size());
      for (std::size_t i = 0; i < trace.size(); ++i) {
        CHECK(a.records[i].job_id == trace.arrivals[i].job.job_id);
        CHECK(a.records[i].start_s >= a.records[i].arrival_s);
        CHECK(a.records[i].finish_s > a.records[i].start_s);
      }
      std::map<std::string, std::vector<std::pair<double, double>>> spans;
      double busy = 0;
      for (const auto& r : a.records) {
        spans[r.worker_id].emplace_back(r.start_s, r.finish_s);
        busy += r.finish_s - r.start_s;
      }
      for (auto& [w, v] : spans) {
        std::sort(v.begin(), v.end());
        for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i].first >= v[i - 1].second);
      }
      CHECK(a.ledger.total_busy_seconds() == doctest::Approx(busy).epsilon(1e-9));
      CHECK(a.ledger == ledger_from_records(c, a.records));
    }
  }
}

TEST_CASE("energy is busy time times config power") {
  auto c = default_cluster();
  EnergyLedger ledger(c);
  ledger.add_interval(c, "x86", ConfigChoice::threads(4), 0, 10);
  ledger.add_interval(c, "x86", ConfigChoice::threads(16), 20, 25);
  ledger.add_interval(c, "agx", ConfigChoice::mode(1), 0, 2);
  CHECK(ledger.at("x86").busy_seconds == 15);
  CHECK(ledger.at("x86").joules == doctest::Approx(15 * nominal_power(c, c.worker("x86"), ConfigChoice::threads(4))));
  CHECK(ledger.at("agx").joules == doctest::Approx(2 * nominal_power(c, c.worker("agx"), ConfigChoice::mode(1))));
  CHECK(ledger.at("nx").joules == 0);
  CHECK(ledger.total_busy_seconds() == 17);
}

TEST_CASE("noise stays within its band") {
  Setup s(testing::flat_cluster(1), {timed("e", "w1", "threads:2", 10)});
  ArrivalTrace t;
  for (int i = 0; i < 50; ++i) t.arrivals.push_back({i * 100.0, JobSpec{"j" + std::to_string(i), "e", 100, 1e6}});
  SimOptions opt;
  opt.exec_noise = 0.2;
  opt.noise_seed = 77;
  auto res = run(t, s.cluster, s.dict, s.table, "rr", opt);
  bool varied = false;
  for (const auto& r : res.records) {
    double d = r.finish_s - r.start_s;
    CHECK(d >= 8 - 1e-9);
    CHECK(d <= 12 + 1e-9);
    varied |= std::abs(d - 10) > 1e-6;
  }
  CHECK(varied);
  CHECK_THROWS_AS(run(t, s.cluster, s.dict, s.table, "rr", SimOptions{5, 0.7, 0}), Error);
}

TEST_CASE("idle periods advance the clock without ticks piling up") {
  Setup s(testing::flat_cluster(1), {timed("e", "w1", "threads:2", 10)});
  auto t = make_trace({{0, "a", "e", 100}, {1e5, "b", "e", 100}});
  SynergAIScheduler sch(s.ctx());
  auto res = run(t, sch);
  CHECK(res.records[1].start_s == 1e5);
  CHECK(res.decisions < 10);
}

TEST_CASE("exhaustive minimum on hand-checked instances") {
  Setup s(testing::flat_cluster(2), {timed("e", "w1", "threads:2", 10), timed("e", "w2", "threads:2", 10)});
  // Zero: two jobs, two workers.
  auto two = make_trace({{0, "a", "e", 15}, {0, "b", "e", 15}});
  CHECK(brute_force_min_violations(two.arrivals, s.ctx()) == 0);
  // One: the third job must queue behind a 10 s job.
  auto three = make_trace({{0, "a", "e", 15}, {0, "b", "e", 15}, {0, "c", "e", 15}});
  CHECK(brute_force_min_violations(three.arrivals, s.ctx()) == 1);
  // 3! orders times 2^3 placements by hand.
  auto dur = [](std::size_t, std::size_t) { return 10.0; };
  CHECK(enumerate_min_violations(three.arrivals, s.cluster, dur) == 1);
  // Staggered: c arrives after a finishes.
  auto staggered = make_trace({{0, "a", "e", 15}, {0, "b", "e", 15}, {10, "c", "e", 15}});
  CHECK(brute_force_min_violations(staggered.arrivals, s.ctx()) == 0);

  std::vector<Arrival> seven(7, Arrival{0, JobSpec{"x", "e", 100, 1}});
  for (std::size_t i = 0; i < 7; ++i) seven[i].job.job_id = "x" + std::to_string(i);
  CHECK_THROWS_AS(brute_force_min_violations(seven, s.ctx()), Error);
}

TEST_CASE("exhaustive minimum agrees with the plain enumeration") {
  auto c = default_cluster();
  auto records = synth_profiles(c, c.engines(), 21);
  Setup s(c, records);
  std::mt19937_64 gen(3);
  for (int round = 0; round < 40; ++round) {
    std::size_t n = 1 + gen() % 4;
    std::vector<Arrival> jobs;
    double t = 0;
    for (std::size_t i = 0; i < n; ++i) {
      t += static_cast<double>(gen() % 200);
      const auto& e = c.engines()[gen() % c.engines().size()];
      jobs.push_back({t, JobSpec{"j" + std::to_string(i), e.engine_id, 1024, 50.0 + static_cast<double>(gen() % 500)}});
    }
    auto dur = [&](std::size_t k, std::size_t w) {
      const auto& worker = c.workers()[w];
      auto entry = s.dict.lookup(jobs[k].job.engine_id, worker.worker_id);
      return execution_time(jobs[k].job, worker, entry->config, s.ctx());
    };
    CHECK(brute_force_min_violations(jobs, s.ctx()) == enumerate_min_violations(jobs, c, dur));
  }
}

TEST_CASE("timeline csv") {
  auto r = make_record("j", "e", 0, 1, 2.5, "nx", ConfigChoice::mode(9), 2);
  auto csv = dump_timeline({r});
  CHECK(csv.rfind("job_id,engine_id,worker_id,config,arrival_s,start_s,finish_s,t_qos_s,violated\n", 0) == 0);
  CHECK(csv.find("j,e,nx,mode:9,") != std::string::npos);
}
