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
#include <filesystem>
#include <string>
#include <vector>

#include "edgesched/cluster.hpp"
#include "edgesched/profiles.hpp"

namespace edgesched {

/// An inference job: run `q` queries of `engine_id` within `t_qos_s` of arrival.
struct JobSpec {
  std::string job_id;
  std::string engine_id;
  int q = 1;
  double t_qos_s = 1.0;

  friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

struct Arrival {
  double arrival_time_s = 0.0;
  JobSpec job;

  friend bool operator==(const Arrival&, const Arrival&) = default;
};

/// Arrivals in non-decreasing time order with unique job ids.
struct ArrivalTrace {
  std::vector<Arrival> arrivals;

  std::size_t size() const { return arrivals.size(); }
  friend bool operator==(const ArrivalTrace&, const ArrivalTrace&) = default;
};

/// Throws InvalidRecord when times regress, ids repeat, or a job is malformed.
void check_trace(const ArrivalTrace& trace);

enum class Demand { Low, High };
enum class Frequency { Low, High };

struct ExperimentRegime {
  Demand demand = Demand::Low;
  Frequency frequency = Frequency::Low;
  int n_jobs = 24;
  std::uint64_t seed = 0;

  /// "DL-FL", "DL-FH", "DH-FH" or "DH-FL".
  std::string name() const;
  static ExperimentRegime parse(std::string_view name, int n_jobs = 24, std::uint64_t seed = 0);
};

/// QoS deadline for one engine: the median (DL) or lower quartile (DH) of the
/// total execution time over every config and worker it was profiled on.
double derive_demand(const std::vector<ProfileRecord>& engine_records, Demand intensity);

/// Poisson arrival rate from the pooled total-time distribution: 1 / median
/// for FL, 1 / lower quartile for FH.
double derive_lambda(const std::vector<ProfileRecord>& records, Frequency frequency);

/// Generates `regime.n_jobs` arrivals with exponential gaps at rate `lambda`.
/// Engines cycle through `engines` in order; each job runs the cluster's
/// reference query count with the engine's derived deadline. Arrival times
/// are partial sums of the gaps, so the first job arrives after one gap.
ArrivalTrace gen_trace(const ExperimentRegime& regime, const std::vector<EngineSpec>& engines,
                       const std::vector<ProfileRecord>& records, int reference_queries,
                       double lambda);

/// CSV with header `arrival_time_s,job_id,engine_id,q,t_qos_s`.
std::string dump_trace(const ArrivalTrace& trace);
ArrivalTrace parse_trace(const std::string& text, const std::string& source = "<trace>");
ArrivalTrace load_trace(const std::filesystem::path& path);
void save_trace(const ArrivalTrace& trace, const std::filesystem::path& path);

}  // namespace edgesched
