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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edgesched/sim.hpp"

namespace edgesched {

struct SummaryStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double p99 = 0.0;
  friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

/// min / max / mean / 99th percentile (rank interpolation). Throws EmptyRun
/// on an empty sample.
SummaryStats summarize(std::span<const double> values);

struct RunReport {
  std::string policy;
  std::string regime;
  std::uint64_t seed = 0;
  int violations = 0;
  SummaryStats wait;
  SummaryStats e2e;
  /// Mean over all jobs; jobs within their deadline count as zero.
  SummaryStats excess;
  std::map<std::string, double> energy_j;
  std::map<std::string, double> busy_s;
  std::map<std::string, double> assignment_fraction;
  /// Wall-clock decision time. Not deterministic; empty when not measured.
  std::optional<SummaryStats> overhead;
  std::vector<JobRecord> records;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Aggregates one run. Throws EmptyRun when `records` is empty.
RunReport aggregate(const std::vector<JobRecord>& records, const EnergyLedger& ledger,
                    const std::vector<double>& overheads_s = {});

/// Sum of joules over the given workers.
double energy_of(const RunReport& report, const std::vector<std::string>& worker_ids);

/// Divides each report's per-worker joules by the maximum for that worker
/// across reports. A worker nobody used maps to 0.
std::vector<std::map<std::string, double>> normalize_energy(const std::vector<RunReport>& reports);

/// Ratio of a baseline metric to SynergAI's. `infinite` is set when SynergAI
/// scored zero and the baseline did not; 0 / 0 counts as 1.
struct Ratio {
  double value = 1.0;
  bool infinite = false;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};
Ratio ratio(double baseline, double reference);

/// Seed-averaged metrics of one policy within a regime.
struct PolicyRow {
  std::string policy;
  std::size_t runs = 0;
  double violations = 0.0;
  double wait_mean_s = 0.0;
  double e2e_mean_s = 0.0;
  double e2e_p99_s = 0.0;
  double excess_mean_s = 0.0;
  double edge_energy_j = 0.0;
  double normalized_edge_energy = 0.0;
};

struct RegimeComparison {
  std::string regime;
  std::vector<PolicyRow> rows;  ///< SynergAI first, then the baselines
  /// Baseline / SynergAI ratios per policy for violations, excess and p99.
  std::map<std::string, Ratio> violation_ratio;
  std::map<std::string, Ratio> excess_ratio;
  std::map<std::string, Ratio> p99_ratio;
};

struct RatioAverage {
  double mean = 0.0;
  std::size_t used = 0;
  std::size_t infinite = 0;  ///< cells excluded from the mean
};

struct ComparisonSummary {
  std::vector<RegimeComparison> regimes;
  /// Per-policy violation ratio averaged across regimes.
  std::map<std::string, RatioAverage> per_policy;
  /// Rule-based baselines (RR, SRR, LRU, MRU, BE) pooled, and SLO-MAEL alone.
  RatioAverage simple_baselines;
  RatioAverage slo_mael;
};

/// Groups reports by regime and policy, averages over seeds and forms ratios
/// against SynergAI. `edge_workers` selects the workers counted as edge
/// energy. Regimes and policies come out in a fixed order whatever the
/// order of `reports`.
ComparisonSummary compare(const std::vector<RunReport>& reports, const std::vector<std::string>& edge_workers);

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);
/// One CSV table per regime: rows are policies, columns the metrics.
std::string comparison_table(const RegimeComparison& comparison);
std::string summary_to_json(const ComparisonSummary& summary);

}  // namespace edgesched
