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

#include "edgesched/metrics.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "edgesched/stats.hpp"

namespace edgesched {
namespace {

using Json = nlohmann::ordered_json;

Json stats_json(const SummaryStats& s) {
  return Json{{"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"p99", s.p99}};
}

SummaryStats stats_from(const Json& j) {
  return {j.at("min").get<double>(), j.at("max").get<double>(), j.at("mean").get<double>(),
          j.at("p99").get<double>()};
}

double mean_of(const std::vector<double>& v) { return v.empty() ? 0.0 : mean(v); }

const char* kSimple[] = {"rr", "srr", "lru", "mru", "be"};
const char* kRegimeOrder[] = {"DL-FL", "DL-FH", "DH-FH", "DH-FL"};
const char* kPolicyOrder[] = {"synergai", "rr", "srr", "lru", "mru", "be", "slo-mael"};

// Known names first in their usual order, anything else after, by name.
template <std::size_t N>
void canonical_sort(std::vector<std::string>& names, const char* const (&known)[N]) {
  auto rank = [&](const std::string& n) {
    auto it = std::find(std::begin(known), std::end(known), n);
    return static_cast<std::size_t>(it - std::begin(known));
  };
  std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
    return std::make_pair(rank(a), a) < std::make_pair(rank(b), b);
  });
}

}  // namespace

SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::EmptyRun, "no values to summarize");
  auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return {*lo, *hi, mean(values), percentile(values, 0.99)};
}

RunReport aggregate(const std::vector<JobRecord>& records, const EnergyLedger& ledger,
                    const std::vector<double>& overheads_s) {
  if (records.empty()) throw Error(ErrorKind::EmptyRun, "run has no job records");
  RunReport r;
  std::vector<double> wait, e2e, excess;
  std::map<std::string, std::size_t> count;
  for (const auto& [id, e] : ledger.workers()) count[id] = 0;
  for (const auto& rec : records) {
    wait.push_back(rec.wait_s);
    e2e.push_back(rec.e2e_s);
    excess.push_back(rec.excess_s);
    if (rec.violated) ++r.violations;
    ++count[rec.worker_id];
  }
  r.wait = summarize(wait);
  r.e2e = summarize(e2e);
  r.excess = summarize(excess);
  for (const auto& [id, e] : ledger.workers()) {
    r.energy_j[id] = e.joules;
    r.busy_s[id] = e.busy_seconds;
  }
  for (const auto& [id, c] : count) {
    r.assignment_fraction[id] = static_cast<double>(c) / static_cast<double>(records.size());
  }
  if (!overheads_s.empty()) r.overhead = summarize(overheads_s);
  r.records = records;
  return r;
}

double energy_of(const RunReport& report, const std::vector<std::string>& worker_ids) {
  double total = 0.0;
  for (const auto& id : worker_ids) {
    if (auto it = report.energy_j.find(id); it != report.energy_j.end()) total += it->second;
  }
  return total;
}

std::vector<std::map<std::string, double>> normalize_energy(const std::vector<RunReport>& reports) {
  std::map<std::string, double> peak;
  for (const auto& r : reports) {
    for (const auto& [id, j] : r.energy_j) peak[id] = std::max(peak[id], j);
  }
  std::vector<std::map<std::string, double>> out;
  for (const auto& r : reports) {
    std::map<std::string, double> row;
    for (const auto& [id, j] : r.energy_j) row[id] = peak[id] > 0.0 ? j / peak[id] : 0.0;
    out.push_back(std::move(row));
  }
  return out;
}

Ratio ratio(double baseline, double reference) {
  if (reference == 0.0) return baseline == 0.0 ? Ratio{1.0, false} : Ratio{0.0, true};
  return {baseline / reference, false};
}

ComparisonSummary compare(const std::vector<RunReport>& reports, const std::vector<std::string>& edge_workers) {
  ComparisonSummary summary;
  std::vector<std::string> regime_order;
  for (const auto& r : reports) {
    if (std::find(regime_order.begin(), regime_order.end(), r.regime) == regime_order.end()) {
      regime_order.push_back(r.regime);
    }
  }
  canonical_sort(regime_order, kRegimeOrder);
  std::vector<double> simple_cells, mael_cells;
  std::size_t simple_inf = 0, mael_inf = 0;
  std::map<std::string, std::vector<double>> policy_cells;
  std::map<std::string, std::size_t> policy_inf;

  for (const auto& regime : regime_order) {
    RegimeComparison cmp;
    cmp.regime = regime;
    std::vector<std::string> policy_order;
    std::map<std::string, std::vector<const RunReport*>> by_policy;
    for (const auto& r : reports) {
      if (r.regime != regime) continue;
      if (!by_policy.count(r.policy)) policy_order.push_back(r.policy);
      by_policy[r.policy].push_back(&r);
    }
    canonical_sort(policy_order, kPolicyOrder);
    for (auto& [p, runs] : by_policy) {
      std::stable_sort(runs.begin(), runs.end(), [](const RunReport* a, const RunReport* b) { return a->seed < b->seed; });
    }
    // Edge energy is normalized per seed across the policies of that seed,
    // then averaged.
    std::map<std::uint64_t, double> peak_edge;
    for (const auto& r : reports) {
      if (r.regime == regime) peak_edge[r.seed] = std::max(peak_edge[r.seed], energy_of(r, edge_workers));
    }
    for (const auto& policy : policy_order) {
      PolicyRow row;
      row.policy = policy;
      std::vector<double> v, w, e, p, x, en, nen;
      for (const auto* r : by_policy[policy]) {
        v.push_back(r->violations);
        w.push_back(r->wait.mean);
        e.push_back(r->e2e.mean);
        p.push_back(r->e2e.p99);
        x.push_back(r->excess.mean);
        double edge = energy_of(*r, edge_workers);
        en.push_back(edge);
        double peak = peak_edge[r->seed];
        nen.push_back(peak > 0.0 ? edge / peak : 0.0);
      }
      row.runs = v.size();
      row.violations = mean_of(v);
      row.wait_mean_s = mean_of(w);
      row.e2e_mean_s = mean_of(e);
      row.e2e_p99_s = mean_of(p);
      row.excess_mean_s = mean_of(x);
      row.edge_energy_j = mean_of(en);
      row.normalized_edge_energy = mean_of(nen);
      cmp.rows.push_back(row);
    }
    auto ref = std::find_if(cmp.rows.begin(), cmp.rows.end(), [](const PolicyRow& r) { return r.policy == "synergai"; });
    if (ref != cmp.rows.end()) {
      for (const auto& row : cmp.rows) {
        if (row.policy == "synergai") continue;
        auto vr = ratio(row.violations, ref->violations);
        cmp.violation_ratio[row.policy] = vr;
        cmp.excess_ratio[row.policy] = ratio(row.excess_mean_s, ref->excess_mean_s);
        cmp.p99_ratio[row.policy] = ratio(row.e2e_p99_s, ref->e2e_p99_s);
        if (vr.infinite) {
          ++policy_inf[row.policy];
        } else {
          policy_cells[row.policy].push_back(vr.value);
        }
        bool simple = std::find(std::begin(kSimple), std::end(kSimple), row.policy) != std::end(kSimple);
        bool mael = row.policy == "slo-mael";
        if (!simple && !mael) continue;
        auto& cells = simple ? simple_cells : mael_cells;
        auto& inf = simple ? simple_inf : mael_inf;
        if (vr.infinite) {
          ++inf;
        } else {
          cells.push_back(vr.value);
        }
      }
    }
    summary.regimes.push_back(std::move(cmp));
  }
  std::set<std::string> policies;
  for (const auto& [p, c] : policy_cells) policies.insert(p);
  for (const auto& [p, c] : policy_inf) policies.insert(p);
  for (const auto& p : policies) {
    const auto& cells = policy_cells[p];
    summary.per_policy[p] = {mean_of(cells), cells.size(), policy_inf[p]};
  }
  summary.simple_baselines = {mean_of(simple_cells), simple_cells.size(), simple_inf};
  summary.slo_mael = {mean_of(mael_cells), mael_cells.size(), mael_inf};
  return summary;
}

std::string report_to_json(const RunReport& report) {
  Json j;
  j["policy"] = report.policy;
  j["regime"] = report.regime;
  j["seed"] = report.seed;
  j["jobs"] = report.records.size();
  j["violations"] = report.violations;
  j["wait_s"] = stats_json(report.wait);
  j["e2e_s"] = stats_json(report.e2e);
  j["excess_s"] = stats_json(report.excess);
  j["energy_j"] = report.energy_j;
  j["busy_s"] = report.busy_s;
  j["assignment_fraction"] = report.assignment_fraction;
  if (report.overhead) j["overhead_s"] = stats_json(*report.overhead);
  Json rows = Json::array();
  for (const auto& r : report.records) {
    rows.push_back(Json{{"job_id", r.job_id},
                        {"engine_id", r.engine_id},
                        {"arrival_s", r.arrival_s},
                        {"start_s", r.start_s},
                        {"finish_s", r.finish_s},
                        {"worker_id", r.worker_id},
                        {"config", r.config.to_string()},
                        {"t_qos_s", r.t_qos_s},
                        {"wait_s", r.wait_s},
                        {"e2e_s", r.e2e_s},
                        {"excess_s", r.excess_s},
                        {"violated", r.violated}});
  }
  j["jobs_detail"] = std::move(rows);
  return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("report: ") + e.what());
  }
  try {
    RunReport r;
    r.policy = j.at("policy").get<std::string>();
    r.regime = j.at("regime").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.violations = j.at("violations").get<int>();
    r.wait = stats_from(j.at("wait_s"));
    r.e2e = stats_from(j.at("e2e_s"));
    r.excess = stats_from(j.at("excess_s"));
    r.energy_j = j.at("energy_j").get<std::map<std::string, double>>();
    r.busy_s = j.at("busy_s").get<std::map<std::string, double>>();
    r.assignment_fraction = j.at("assignment_fraction").get<std::map<std::string, double>>();
    if (j.contains("overhead_s")) r.overhead = stats_from(j.at("overhead_s"));
    for (const auto& row : j.at("jobs_detail")) {
      r.records.push_back(make_record(row.at("job_id").get<std::string>(), row.at("engine_id").get<std::string>(),
                                      row.at("arrival_s").get<double>(), row.at("start_s").get<double>(),
                                      row.at("finish_s").get<double>(), row.at("worker_id").get<std::string>(),
                                      ConfigChoice::parse(row.at("config").get<std::string>()),
                                      row.at("t_qos_s").get<double>()));
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("report: ") + e.what());
  }
}

std::string comparison_table(const RegimeComparison& comparison) {
  std::ostringstream out;
  out << "policy,runs,violations,wait_mean_s,e2e_mean_s,e2e_p99_s,excess_mean_s,edge_energy_j,"
         "normalized_edge_energy,violation_ratio\n";
  for (const auto& row : comparison.rows) {
    std::string vr = "1";
    if (auto it = comparison.violation_ratio.find(row.policy); it != comparison.violation_ratio.end()) {
      vr = it->second.infinite ? "inf" : fmt::format("{}", it->second.value);
    }
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", row.policy, row.runs, row.violations, row.wait_mean_s,
                       row.e2e_mean_s, row.e2e_p99_s, row.excess_mean_s, row.edge_energy_j,
                       row.normalized_edge_energy, vr);
  }
  return out.str();
}

std::string summary_to_json(const ComparisonSummary& summary) {
  auto ratio_json = [](const Ratio& r) -> Json {
    if (r.infinite) return "inf";
    return r.value;
  };
  auto avg_json = [](const RatioAverage& a) {
    return Json{{"mean", a.mean}, {"used", a.used}, {"excluded_infinite", a.infinite}};
  };
  Json j;
  Json regimes = Json::array();
  for (const auto& cmp : summary.regimes) {
    Json rows = Json::array();
    for (const auto& row : cmp.rows) {
      Json jr{{"policy", row.policy},
              {"runs", row.runs},
              {"violations", row.violations},
              {"wait_mean_s", row.wait_mean_s},
              {"e2e_mean_s", row.e2e_mean_s},
              {"e2e_p99_s", row.e2e_p99_s},
              {"excess_mean_s", row.excess_mean_s},
              {"edge_energy_j", row.edge_energy_j},
              {"normalized_edge_energy", row.normalized_edge_energy}};
      if (auto it = cmp.violation_ratio.find(row.policy); it != cmp.violation_ratio.end()) {
        jr["violation_ratio"] = ratio_json(it->second);
        jr["excess_ratio"] = ratio_json(cmp.excess_ratio.at(row.policy));
        jr["p99_ratio"] = ratio_json(cmp.p99_ratio.at(row.policy));
      }
      rows.push_back(std::move(jr));
    }
    regimes.push_back(Json{{"regime", cmp.regime}, {"policies", std::move(rows)}});
  }
  j["regimes"] = std::move(regimes);
  Json per = Json::object();
  for (const auto& [p, a] : summary.per_policy) per[p] = avg_json(a);
  j["violation_ratio_by_policy"] = std::move(per);
  j["violation_ratio_simple_baselines"] = avg_json(summary.simple_baselines);
  j["violation_ratio_slo_mael"] = avg_json(summary.slo_mael);
  return j.dump(2) + "\n";
}

}  // namespace edgesched
