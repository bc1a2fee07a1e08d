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

#include "edgesched/workload.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "edgesched/stats.hpp"

namespace edgesched {

void check_trace(const ArrivalTrace& trace) {
  std::set<std::string> ids;
  double last = 0.0;
  for (const auto& a : trace.arrivals) {
    if (!(a.arrival_time_s >= 0.0) || !std::isfinite(a.arrival_time_s)) {
      throw Error(ErrorKind::InvalidRecord, "job '" + a.job.job_id + "' has a bad arrival time");
    }
    if (a.arrival_time_s < last) {
      throw Error(ErrorKind::InvalidRecord, "arrival times regress at job '" + a.job.job_id + "'");
    }
    last = a.arrival_time_s;
    if (!ids.insert(a.job.job_id).second) {
      throw Error(ErrorKind::InvalidRecord, "job id '" + a.job.job_id + "' repeats");
    }
    if (a.job.q < 1) throw Error(ErrorKind::InvalidRecord, "job '" + a.job.job_id + "' needs q >= 1");
    if (!(a.job.t_qos_s > 0.0)) {
      throw Error(ErrorKind::InvalidRecord, "job '" + a.job.job_id + "' needs a positive deadline");
    }
  }
}

std::string ExperimentRegime::name() const {
  return std::string(demand == Demand::Low ? "DL" : "DH") + "-" +
         (frequency == Frequency::Low ? "FL" : "FH");
}

ExperimentRegime ExperimentRegime::parse(std::string_view name, int n_jobs, std::uint64_t seed) {
  ExperimentRegime r;
  r.n_jobs = n_jobs;
  r.seed = seed;
  if (name.size() != 5 || name[2] != '-' || name[0] != 'D' || name[3] != 'F') {
    throw Error(ErrorKind::Parse, "unknown regime '" + std::string(name) + "'");
  }
  auto level = [&](char c) {
    if (c == 'L') return false;
    if (c == 'H') return true;
    throw Error(ErrorKind::Parse, "unknown regime '" + std::string(name) + "'");
  };
  r.demand = level(name[1]) ? Demand::High : Demand::Low;
  r.frequency = level(name[4]) ? Frequency::High : Frequency::Low;
  if (n_jobs < 1) throw Error(ErrorKind::InvalidRecord, "a regime needs at least one job");
  return r;
}

namespace {

std::vector<double> totals(const std::vector<ProfileRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.total_s);
  return out;
}

}  // namespace

double derive_demand(const std::vector<ProfileRecord>& engine_records, Demand intensity) {
  if (engine_records.empty()) throw Error(ErrorKind::EmptyProfileSet, "no records for demand");
  auto t = totals(engine_records);
  return percentile(t, intensity == Demand::Low ? 0.5 : 0.25);
}

double derive_lambda(const std::vector<ProfileRecord>& records, Frequency frequency) {
  if (records.empty()) throw Error(ErrorKind::EmptyProfileSet, "no records for arrival rate");
  auto t = totals(records);
  return 1.0 / percentile(t, frequency == Frequency::Low ? 0.5 : 0.25);
}

ArrivalTrace gen_trace(const ExperimentRegime& regime, const std::vector<EngineSpec>& engines,
                       const std::vector<ProfileRecord>& records, int reference_queries,
                       double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidRecord, "arrival rate must be positive");
  if (engines.empty()) throw Error(ErrorKind::EmptyProfileSet, "no engines to draw jobs from");
  std::vector<double> deadline;
  for (const auto& e : engines) {
    std::vector<ProfileRecord> own;
    for (const auto& r : records) {
      if (r.engine_id == e.engine_id) own.push_back(r);
    }
    if (own.empty()) throw Error(ErrorKind::EmptyProfileSet, "engine '" + e.engine_id + "' has no records");
    deadline.push_back(derive_demand(own, regime.demand));
  }

  int width = std::max<int>(2, static_cast<int>(std::to_string(regime.n_jobs).size()));
  Rng rng(regime.seed);
  ArrivalTrace trace;
  double t = 0.0;
  for (int i = 0; i < regime.n_jobs; ++i) {
    t += rng.exponential(lambda);
    auto ei = static_cast<std::size_t>(i) % engines.size();
    JobSpec job{fmt::format("J{:0{}}", i + 1, width), engines[ei].engine_id, reference_queries,
                deadline[ei]};
    trace.arrivals.push_back({t, std::move(job)});
  }
  return trace;
}

std::string dump_trace(const ArrivalTrace& trace) {
  std::string out = "arrival_time_s,job_id,engine_id,q,t_qos_s\n";
  for (const auto& a : trace.arrivals) {
    out += fmt::format("{},{},{},{},{}\n", a.arrival_time_s, a.job.job_id, a.job.engine_id, a.job.q,
                       a.job.t_qos_s);
  }
  return out;
}

ArrivalTrace parse_trace(const std::string& text, const std::string& source) {
  ArrivalTrace trace;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line.rfind("arrival_time_s", 0) == 0) continue;
    auto where = source + ":" + std::to_string(line_no) + ": ";
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 5) throw Error(ErrorKind::Parse, where + "expected 5 columns");
    try {
      Arrival a;
      a.arrival_time_s = std::stod(cells[0]);
      a.job.job_id = cells[1];
      a.job.engine_id = cells[2];
      a.job.q = std::stoi(cells[3]);
      a.job.t_qos_s = std::stod(cells[4]);
      trace.arrivals.push_back(std::move(a));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, where + "bad number");
    }
  }
  check_trace(trace);
  return trace;
}

ArrivalTrace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open trace file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str(), path.string());
}

void save_trace(const ArrivalTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write trace file " + path.string());
  out << dump_trace(trace);
}

}  // namespace edgesched
