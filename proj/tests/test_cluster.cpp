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

#include "edgesched/cluster.hpp"
#include "edgesched/cluster_io.hpp"
#include "helpers.hpp"

using namespace edgesched;

namespace {

Worker x86(const std::string& id, std::vector<int> levels) {
  return Worker{id, Arch::X86, ThreadScaling{std::move(levels)}, 105.0, 16, 16};
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("default cluster matches the testbed") {
  auto c = default_cluster();
  REQUIRE(c.size() == 3);
  CHECK(c.worker("x86").configs().size() == 5);
  CHECK(c.worker("agx").configs().size() == 6);
  CHECK(c.worker("nx").configs().size() == 9);
  CHECK(c.engines().size() == 12);
  CHECK(c.worker("agx").vcpus == 8);

  // Power mode table as published.
  struct Row {
    const char* board;
    int mode, mhz, cpus;
    double watts;  // 0 = unbounded
  };
  const Row rows[] = {{"agx", 1, 1200, 8, 30}, {"agx", 2, 1450, 6, 30}, {"agx", 3, 1780, 4, 30},
                      {"agx", 4, 2100, 2, 30}, {"agx", 5, 2188, 4, 15}, {"agx", 6, 2266, 8, 0},
                      {"nx", 1, 1200, 4, 10},  {"nx", 2, 1400, 4, 15},  {"nx", 3, 1400, 4, 20},
                      {"nx", 4, 1400, 6, 15},  {"nx", 5, 1400, 6, 20},  {"nx", 6, 1500, 2, 10},
                      {"nx", 7, 1900, 2, 15},  {"nx", 8, 1900, 2, 20},  {"nx", 9, 1900, 4, 10}};
  for (const auto& r : rows) {
    const auto& m = c.worker(r.board).mode(r.mode);
    CHECK(m.max_cpu_freq_mhz == r.mhz);
    CHECK(m.online_cpus == r.cpus);
    if (r.watts == 0) {
      CHECK(m.unbounded());
    } else {
      CHECK(*m.power_budget_w == r.watts);
    }
  }
}

TEST_CASE("cluster validation errors") {
  CHECK(kind_of([] { validate_cluster({}); }) == ErrorKind::EmptyCluster);
  CHECK(kind_of([] { validate_cluster({x86("a", {1, 2}), x86("a", {1})}); }) == ErrorKind::DuplicateWorkerId);
  CHECK(kind_of([] { validate_cluster({x86("a", {})}); }) == ErrorKind::InvalidTuning);
  CHECK(kind_of([] { validate_cluster({x86("a", {1, 4, 2})}); }) == ErrorKind::InvalidTuning);
  CHECK(kind_of([] { validate_cluster({x86("a", {2, 2})}); }) == ErrorKind::InvalidTuning);
  CHECK(kind_of([] { validate_cluster({x86("a", {0, 1})}); }) == ErrorKind::InvalidTuning);

  Worker arm{"b", Arch::Arm, ThreadScaling{{1, 2}}, 10.0, 4, 4};
  CHECK(kind_of([&] { validate_cluster({arm}); }) == ErrorKind::InvalidTuning);
  arm.tuning = ModeSelection{{{1, 1000, 2, 10.0}, {1, 1200, 2, 10.0}}};
  CHECK(kind_of([&] { validate_cluster({arm}); }) == ErrorKind::InvalidTuning);
  arm.tuning = ModeSelection{};
  CHECK(kind_of([&] { validate_cluster({arm}); }) == ErrorKind::InvalidTuning);

  EngineSpec e{"e", "t", "b", "m", "d", 0.7};
  CHECK(kind_of([&] { validate_cluster({x86("a", {1})}, {e, e}); }) == ErrorKind::DuplicateEngineId);
}

TEST_CASE("nominal power per config") {
  auto c = default_cluster();
  CHECK(nominal_power(c, c.worker("nx"), ConfigChoice::mode(9)) == 10.0);
  CHECK(nominal_power(c, c.worker("x86"), ConfigChoice::threads(8)) == 105.0);
  CHECK(nominal_power(c, c.worker("x86"), ConfigChoice::threads(1)) == 105.0);
  CHECK(nominal_power(c, c.worker("agx"), ConfigChoice::mode(6)) == 30.0);
  CHECK(nominal_power(c.with_maxn_substitute(42.5), c.worker("agx"), ConfigChoice::mode(6)) == 42.5);
  CHECK(kind_of([&] { nominal_power(c, c.worker("agx"), ConfigChoice::mode(7)); }) == ErrorKind::UnknownConfig);
  CHECK(kind_of([&] { nominal_power(c, c.worker("x86"), ConfigChoice::threads(3)); }) == ErrorKind::UnknownConfig);
  CHECK(kind_of([&] { nominal_power(c, c.worker("x86"), ConfigChoice::mode(1)); }) == ErrorKind::UnknownConfig);
  // Total on its domain.
  for (const auto& w : c.workers()) {
    for (const auto& cfg : w.configs()) CHECK(nominal_power(c, w, cfg) > 0.0);
  }
}

TEST_CASE("config choice text form") {
  CHECK(ConfigChoice::parse("threads:8") == ConfigChoice::threads(8));
  CHECK(ConfigChoice::parse("mode:6") == ConfigChoice::mode(6));
  CHECK(ConfigChoice::mode(6).to_string() == "mode:6");
  CHECK(kind_of([] { ConfigChoice::parse("threads"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { ConfigChoice::parse("cores:2"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { ConfigChoice::parse("mode:x"); }) == ErrorKind::Parse);
}

TEST_CASE("cluster file round trip") {
  auto c = default_cluster().with_maxn_substitute(33.25).with_reference_queries(512);
  auto back = parse_cluster(dump_cluster(c));
  CHECK(back == c);
  CHECK(nominal_power(back, back.worker("agx"), ConfigChoice::mode(6)) == 33.25);
}

TEST_CASE("shipped cluster file equals the built-in cluster") {
  CHECK(load_cluster(EDGESCHED_DATA_DIR "/default_cluster.yaml") == default_cluster());
}

TEST_CASE("cluster file errors carry line numbers") {
  const std::string text =
      "workers:\n"
      "  - worker_id: a\n"
      "    arch: x86\n"
      "    nominal_power_w: 100\n"
      "    vcpus: 4\n"
      "    ram_gb: 4\n"
      "    tuning: {threads: [1, 2]}\n"
      "  - worker_id: b\n"
      "    arch: sparc\n"
      "    nominal_power_w: 100\n"
      "    vcpus: 4\n"
      "    ram_gb: 4\n"
      "    tuning: {threads: [1, 2]}\n";
  try {
    parse_cluster(text, "c.yaml");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("c.yaml:9:") != std::string::npos);
  }

  const std::string dup =
      "workers:\n"
      "  - {worker_id: a, arch: x86, nominal_power_w: 1, vcpus: 1, ram_gb: 1, tuning: {threads: [1]}}\n"
      "  - {worker_id: a, arch: x86, nominal_power_w: 1, vcpus: 1, ram_gb: 1, tuning: {threads: [1]}}\n";
  CHECK(kind_of([&] { parse_cluster(dup); }) == ErrorKind::DuplicateWorkerId);
  CHECK(kind_of([] { parse_cluster("workers: []\n"); }) == ErrorKind::EmptyCluster);
  CHECK(kind_of([] { load_cluster("/nonexistent/cluster.yaml"); }) == ErrorKind::Io);
}
