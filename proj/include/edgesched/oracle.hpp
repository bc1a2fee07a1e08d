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

#include <cstdint>
#include <vector>

#include "edgesched/sim.hpp"

namespace edgesched {

/// Small random instance: 1..max_jobs arrivals of random engines, with gaps
/// and deadlines drawn from a random regime's statistics of `records`.
ArrivalTrace gen_small_instance(const Cluster& cluster, const std::vector<ProfileRecord>& records,
                                std::size_t max_jobs, std::uint64_t seed);

struct OracleCheck {
  std::size_t instances = 0;
  std::size_t equal = 0;
  /// Instances where SynergAI beat the exhaustive minimum (must stay 0).
  std::size_t dominance_failures = 0;
  long synergai_violations = 0;
  long oracle_violations = 0;
  int max_gap = 0;

  double equal_fraction() const {
    return instances == 0 ? 1.0 : static_cast<double>(equal) / static_cast<double>(instances);
  }
};

/// Runs SynergAI and the exhaustive oracle on `instances` generated
/// instances of at most `max_jobs` jobs.
OracleCheck oracle_check(const Cluster& cluster, const std::vector<ProfileRecord>& records,
                         const ConfigurationDictionary& dictionary, std::size_t instances,
                         std::size_t max_jobs, std::uint64_t seed, double tick_s = 5.0);

}  // namespace edgesched
