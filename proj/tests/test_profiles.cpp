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
#include <random>
#include <set>

#include "edgesched/profiles.hpp"
#include "edgesched/stats.hpp"
#include "helpers.hpp"

using namespace edgesched;
using testing::rec;

namespace {

// Independent argmax: plain scan, first strictly greater qps wins, ties
// resolved by fewer resources, then lower frequency, then lower id.
std::map<EngineWorkerKey, ProfileRecord> scan_best(const std::vector<ProfileRecord>& records, const Cluster& c) {
  std::map<EngineWorkerKey, ProfileRecord> best;
  auto cost = [&](const ProfileRecord& r) {
    const auto& w = c.worker(r.worker_id);
    if (r.config.is_threads()) return std::make_tuple(r.config.value(), 0, r.config.value());
    const auto& m = w.mode(r.config.value());
    return std::make_tuple(m.online_cpus, m.max_cpu_freq_mhz, m.mode_id);
  };
  for (const auto& r : records) {
    EngineWorkerKey key{r.engine_id, r.worker_id};
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(key, r);
      continue;
    }
    const auto& cur = it->second;
    if (r.qps > cur.qps || (r.qps == cur.qps && cost(r) < cost(cur))) it->second = r;
  }
  return best;
}

}  // namespace

TEST_CASE("dictionary keeps the highest-qps record") {
  auto c = default_cluster();
  auto d = build_dictionary({rec("e", "x86", "threads:1", 16.5), rec("e", "x86", "threads:8", 48)}, c);
  REQUIRE(d.find("e", "x86") != nullptr);
  CHECK(d.find("e", "x86")->config == ConfigChoice::threads(8));
  CHECK(d.find("e", "x86")->qps == 48);

  auto single = build_dictionary({rec("e", "nx", "mode:3", 7.0, 2.5)}, c);
  CHECK(single.find("e", "nx")->config == ConfigChoice::mode(3));
  CHECK(single.find("e", "nx")->preproc_s == 2.5);
}

TEST_CASE("equal qps goes to fewer resources") {
  auto c = default_cluster();
  auto d = build_dictionary({rec("e", "x86", "threads:8", 30), rec("e", "x86", "threads:4", 30)}, c);
  CHECK(d.find("e", "x86")->config == ConfigChoice::threads(4));
  // AGX modes 3 and 5 both run four CPUs; the lower clock wins.
  auto a = build_dictionary({rec("e", "agx", "mode:5", 9), rec("e", "agx", "mode:3", 9)}, c);
  CHECK(a.find("e", "agx")->config == ConfigChoice::mode(3));
}

TEST_CASE("dictionary entries equal a brute-force argmax and ignore record order") {
  auto c = default_cluster();
  std::mt19937_64 gen(11);
  for (int round = 0; round < 200; ++round) {
    std::vector<ProfileRecord> records;
    for (int e = 0; e < 4; ++e) {
      for (const auto& w : c.workers()) {
        for (const auto& cfg : w.configs()) {
          if (gen() % 3 == 0) continue;
          // Coarse values so ties happen.
          double qps = 1.0 + static_cast<double>(gen() % 6);
          records.push_back({"e" + std::to_string(e), w.worker_id, cfg, qps, 1.0, 1.0 + 1024 / qps});
        }
      }
    }
    auto d = build_dictionary(records, c);
    auto oracle = scan_best(records, c);
    REQUIRE(d.entries().size() == oracle.size());
    for (const auto& [key, r] : oracle) {
      const auto* e = d.find(key.first, key.second);
      REQUIRE(e != nullptr);
      CHECK(e->qps == r.qps);
      CHECK(e->config == r.config);
    }
    std::shuffle(records.begin(), records.end(), gen);
    CHECK(build_dictionary(records, c) == d);
    CHECK(build_dictionary(records, c) == build_dictionary(records, c));
  }
}

TEST_CASE("records are checked against the cluster") {
  auto c = default_cluster();
  CHECK_THROWS_AS(build_dictionary({rec("e", "tpu", "threads:1", 1)}, c), Error);
  try {
    build_dictionary({rec("e", "agx", "mode:7", 1)}, c);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownConfig);
  }
  try {
    build_dictionary({rec("e", "tpu", "threads:1", 1)}, c);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownWorker);
  }
  ProfileRecord bad = rec("e", "x86", "threads:1", 1);
  bad.qps = 0;
  try {
    check_record(bad, c);
    FAIL("zero qps accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidRecord);
  }
}

TEST_CASE("unprofiled boards fall back to the published defaults") {
  auto c = default_cluster();
  ConfigurationDictionary empty;
  CHECK(unprofiled_default_config(c.worker("agx")) == ConfigChoice::mode(6));
  CHECK(unprofiled_default_config(c.worker("nx")) == ConfigChoice::mode(9));
  CHECK(unprofiled_default_config(c.worker("x86")) == ConfigChoice::threads(8));
  CHECK(default_config(c.worker("agx"), empty) == ConfigChoice::mode(6));
  CHECK(default_config(c.worker("nx"), empty) == ConfigChoice::mode(9));
}

TEST_CASE("profiled default is the majority winner") {
  auto c = default_cluster();
  std::vector<ProfileRecord> records;
  for (int e = 0; e < 12; ++e) {
    auto id = "e" + std::to_string(e);
    // Seven engines peak at eight threads, five at sixteen.
    records.push_back(rec(id, "x86", "threads:8", e < 7 ? 50 : 40));
    records.push_back(rec(id, "x86", "threads:16", e < 7 ? 45 : 60));
  }
  auto d = build_dictionary(records, c);
  int eight = 0;
  for (const auto& [engine, entry] : d.worker_entries("x86")) eight += entry.config == ConfigChoice::threads(8);
  CHECK(eight == 7);
  CHECK(default_config(c.worker("x86"), d) == ConfigChoice::threads(8));
  CHECK(d.worker_default("x86").config == ConfigChoice::threads(8));
}

TEST_CASE("lookup falls back to the worker default estimate") {
  auto c = default_cluster();
  std::vector<ProfileRecord> records = {rec("a", "x86", "threads:8", 40, 2), rec("b", "x86", "threads:8", 60, 4),
                                        rec("c", "x86", "threads:8", 80, 6), rec("a", "x86", "threads:16", 30, 2)};
  auto d = build_dictionary(records, c);
  auto hit = d.lookup("a", "x86");
  REQUIRE(hit);
  CHECK(hit->qps == 40);
  auto miss = d.lookup("zzz", "x86");
  REQUIRE(miss);
  CHECK(miss->config == ConfigChoice::threads(8));
  CHECK(miss->qps == 60);  // median of 40, 60, 80
  CHECK(miss->preproc_s == 4);
  // Boards without any record have a default config but nothing to estimate with.
  CHECK(d.worker_default("agx").config == ConfigChoice::mode(6));
  CHECK_FALSE(d.lookup("a", "agx").has_value());
}

TEST_CASE("synthetic profiles obey the characterization laws") {
  auto c = default_cluster();
  auto records = synth_profiles(c, c.engines(), 7);
  REQUIRE(records.size() == 12 * (5 + 6 + 9));
  CHECK(records == synth_profiles(c, c.engines(), 7));
  CHECK(records != synth_profiles(c, c.engines(), 8));

  ProfileTable table(records, c);
  std::vector<double> speedup8;
  for (const auto& e : c.engines()) {
    auto qps = [&](const std::string& w, const ConfigChoice& cfg) { return table.find(e.engine_id, w, cfg)->qps; };
    // Threads: monotone, concave gains.
    const auto& x86 = c.worker("x86");
    auto cfgs = x86.configs();
    for (std::size_t i = 1; i < cfgs.size(); ++i) CHECK(qps("x86", cfgs[i]) >= qps("x86", cfgs[i - 1]));
    CHECK(qps("x86", ConfigChoice::threads(16)) >= qps("x86", ConfigChoice::threads(1)));
    speedup8.push_back(qps("x86", ConfigChoice::threads(8)) / qps("x86", ConfigChoice::threads(1)));

    // Modes: a faster clock never loses to a slower one.
    for (const char* board : {"agx", "nx"}) {
      const auto& w = c.worker(board);
      for (const auto& a : w.configs()) {
        for (const auto& b : w.configs()) {
          if (w.mode(a.value()).max_cpu_freq_mhz > w.mode(b.value()).max_cpu_freq_mhz) {
            CHECK(qps(board, a) >= qps(board, b));
          }
        }
      }
    }
    // Preprocessing is a property of the worker, not the config; totals are consistent.
    for (const auto& w : c.workers()) {
      std::set<double> pre;
      for (const auto& cfg : w.configs()) {
        const auto* r = table.find(e.engine_id, w.worker_id, cfg);
        pre.insert(r->preproc_s);
        CHECK(r->total_s == doctest::Approx(r->preproc_s + 1024 / r->qps).epsilon(1e-12));
      }
      CHECK(pre.size() == 1);
    }
  }
  double mean8 = mean(speedup8);
  CHECK(mean8 >= 3.3);
  CHECK(mean8 <= 4.3);

  // Peak throughput per worker stays inside the observed envelopes.
  SynthOptions opt;
  auto d = build_dictionary(records, c);
  for (const auto& [key, entry] : d.entries()) {
    auto env = opt.envelopes.at(key.second);
    CHECK(entry.qps >= env.lo * (1 - 1e-12));
    CHECK(entry.qps <= env.hi * (1 + 1e-12));
  }
  CHECK(d.worker_default("x86").config == ConfigChoice::threads(8));
  CHECK(d.worker_default("agx").config == ConfigChoice::mode(6));
  CHECK(d.worker_default("nx").config == ConfigChoice::mode(9));
}

TEST_CASE("synthetic speedup stays in band across seeds") {
  auto c = default_cluster();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ProfileTable table(synth_profiles(c, c.engines(), seed), c);
    std::vector<double> s8;
    for (const auto& e : c.engines()) {
      s8.push_back(table.find(e.engine_id, "x86", ConfigChoice::threads(8))->qps /
                   table.find(e.engine_id, "x86", ConfigChoice::threads(1))->qps);
    }
    CHECK(mean(s8) >= 3.3);
    CHECK(mean(s8) <= 4.3);
  }
}

TEST_CASE("profile csv round trip and error lines") {
  auto c = default_cluster();
  auto records = synth_profiles(c, c.engines(), 3);
  auto text = dump_profiles(records);
  CHECK(parse_profiles(text, c) == records);

  std::string bad = "engine_id,worker_id,config,qps,preproc_s,total_s\n"
                    "e,x86,threads:1,10,1,103.4\n"
                    "e,gpu,threads:1,10,1,103.4\n";
  try {
    parse_profiles(bad, c, "p.csv");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownWorker);
    CHECK(std::string(e.what()).find("p.csv:3:") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_profiles("engine_id,worker_id,config,qps,preproc_s,total_s\ne,x86,threads:1,abc,1,2\n", c),
                  Error);
}

TEST_CASE("dictionary json round trip") {
  auto c = default_cluster();
  auto d = build_dictionary(synth_profiles(c, c.engines(), 5), c);
  CHECK(dictionary_from_json(dictionary_to_json(d), c) == d);
  CHECK_THROWS_AS(dictionary_from_json("{not json", c), Error);
}
