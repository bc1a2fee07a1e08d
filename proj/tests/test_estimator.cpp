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

#include <cmath>
#include <limits>

#include "edgesched/estimator.hpp"
#include "helpers.hpp"

using namespace edgesched;
using testing::queued;
using testing::timed;

namespace {

struct Fixture {
  Cluster cluster = default_cluster();
  ConfigurationDictionary dict = build_dictionary(
      {timed("e", "x86", "threads:8", 60), timed("e", "agx", "mode:6", 90), timed("e", "nx", "mode:9", 140)},
      cluster);
};

}  // namespace

TEST_CASE("remaining time") {
  auto job = queued("j", "e", 100, 100, 10);
  CHECK(remaining_time(job, 10) == 100);
  CHECK(remaining_time(job, 40) == 70);
  CHECK(remaining_time(job, 150) == -40);
  try {
    remaining_time(job, 9);
    FAIL("clock regression accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ClockRegression);
  }
}

TEST_CASE("estimate is preprocessing plus q over qps") {
  auto c = default_cluster();
  auto d = build_dictionary({testing::rec("e", "x86", "threads:4", 50, 2, 100)}, c);
  auto est = estimate(JobSpec{"j", "e", 100, 10}, c.worker("x86"), d);
  CHECK(est.t_estimated_s == 4.0);
  CHECK(est.config == ConfigChoice::threads(4));
  auto unit = build_dictionary({testing::rec("e", "x86", "threads:4", 37, 0, 37)}, c);
  CHECK(estimate(JobSpec{"j", "e", 37, 10}, c.worker("x86"), unit).t_estimated_s == 1.0);
  try {
    estimate(JobSpec{"j", "e", 1, 1}, c.worker("agx"), d);
    FAIL("estimate without data");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoEntryAndNoDefault);
  }
}

TEST_CASE("acceptable workers and the optimum") {
  Fixture f;
  auto job = queued("j", "e", 100, 100, 0);
  auto acc = acceptable_workers(job, f.cluster, f.dict, 0);
  REQUIRE(acc.size() == 2);
  CHECK(acc[0].worker_id == "x86");
  CHECK(acc[1].worker_id == "agx");
  auto best = optimal_worker(job, f.cluster, f.dict, 0);
  REQUIRE(best);
  CHECK(best->worker_id == "x86");
  CHECK(best->t_estimated_s == doctest::Approx(60).epsilon(1e-12));

  auto tight = queued("t", "e", 100, 50, 0);
  CHECK(acceptable_workers(tight, f.cluster, f.dict, 0).empty());
  CHECK_FALSE(optimal_worker(tight, f.cluster, f.dict, 0));

  auto loose = queued("l", "e", 100, std::numeric_limits<double>::infinity(), 0);
  auto all = acceptable_workers(loose, f.cluster, f.dict, 0);
  REQUIRE(all.size() == 3);
  CHECK(all[2].worker_id == "nx");

  // Only one worker meets the bound.
  auto one = queued("o", "e", 100, 70, 0);
  REQUIRE(acceptable_workers(one, f.cluster, f.dict, 0).size() == 1);
  CHECK(optimal_worker(one, f.cluster, f.dict, 0)->worker_id == "x86");
}

TEST_CASE("urgency is slack against the fastest worker") {
  Fixture f;
  CHECK(urgency(queued("a", "e", 100, 100, 0), f.cluster, f.dict, 0) == doctest::Approx(40));
  CHECK(urgency(queued("a", "e", 100, 60, 0), f.cluster, f.dict, 0) == doctest::Approx(0).epsilon(1e-12));
  CHECK(urgency(queued("a", "e", 100, 50, 0), f.cluster, f.dict, 0) == doctest::Approx(-10));
  // Advancing the clock by delta lowers slack by delta.
  auto job = queued("a", "e", 100, 100, 0);
  double s0 = urgency(job, f.cluster, f.dict, 0);
  CHECK(urgency(job, f.cluster, f.dict, 17.25) == doctest::Approx(s0 - 17.25).epsilon(1e-12));
  // No estimable worker at all.
  CHECK(std::isinf(urgency(queued("z", "nothing", 1, 1, 0), f.cluster, ConfigurationDictionary{}, 0)));
}

TEST_CASE("estimate ties break by worker id") {
  auto c = default_cluster();
  auto d = build_dictionary({timed("e", "nx", "mode:9", 30), timed("e", "agx", "mode:6", 30)}, c);
  auto all = all_estimates(JobSpec{"j", "e", 100, 100}, c, d);
  REQUIRE(all.size() == 2);
  CHECK(all[0].worker_id == "agx");
  CHECK(all[1].worker_id == "nx");
}

TEST_CASE("faster config means a shorter estimate") {
  auto c = default_cluster();
  double prev = std::numeric_limits<double>::infinity();
  for (double qps : {1.0, 2.0, 5.0, 10.0, 40.0}) {
    auto d = build_dictionary({testing::rec("e", "x86", "threads:8", qps, 3.0)}, c);
    double t = estimate(JobSpec{"j", "e", 1024, 1}, c.worker("x86"), d).t_estimated_s;
    CHECK(t < prev);
    prev = t;
  }
}
