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

#include <string>
#include <vector>

#include "edgesched/cluster.hpp"
#include "edgesched/estimator.hpp"
#include "edgesched/profiles.hpp"
#include "edgesched/scheduler.hpp"

namespace testing {

using namespace edgesched;

inline ProfileRecord rec(const std::string& engine, const std::string& worker, const std::string& config,
                         double qps, double preproc = 0.0, int q = 1024) {
  return {engine, worker, ConfigChoice::parse(config), qps, preproc, preproc + q / qps};
}

// Record whose estimate for a job of `q` queries is exactly `seconds`.
inline ProfileRecord timed(const std::string& engine, const std::string& worker, const std::string& config,
                           double seconds, int q = 100) {
  return rec(engine, worker, config, q / seconds, 0.0, q);
}

inline QueuedJob queued(const std::string& id, const std::string& engine, int q, double t_qos, double arrival) {
  return QueuedJob{JobSpec{id, engine, q, t_qos}, arrival};
}

// Cluster of `n` identical x86 workers w1..wn, threads {1, 2}.
inline Cluster flat_cluster(int n) {
  std::vector<Worker> workers;
  for (int i = 1; i <= n; ++i) {
    workers.push_back(Worker{"w" + std::to_string(i), Arch::X86, ThreadScaling{{1, 2}}, 100.0, 4, 8});
  }
  return validate_cluster(std::move(workers));
}

}  // namespace testing
