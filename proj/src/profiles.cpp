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

#include "edgesched/profiles.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

#include "edgesched/stats.hpp"
#include "json.hpp"

namespace edgesched {
namespace {

struct ResourceKey {
  int resources;  // threads or online CPUs
  int freq_mhz;   // 0 for thread scaling
  int id;         // thread count or mode id
};

ResourceKey resource_key(const Worker& worker, const ConfigChoice& config) {
  if (config.is_threads()) return {config.value(), 0, config.value()};
  const auto& m = worker.mode(config.value());
  return {m.online_cpus, m.max_cpu_freq_mhz, m.mode_id};
}

int config_freq(const Worker& worker, const ConfigChoice& config) {
  return config.is_mode() ? worker.mode(config.value()).max_cpu_freq_mhz : 0;
}

int config_cpus(const Worker& worker, const ConfigChoice& config) {
  return config.is_mode() ? worker.mode(config.value()).online_cpus : config.value();
}

}  // namespace

const OptimalEntry* ConfigurationDictionary::find(std::string_view engine_id,
                                                  std::string_view worker_id) const {
  auto it = entries_.find(EngineWorkerKey(engine_id, worker_id));
  return it == entries_.end() ? nullptr : &it->second;
}

bool ConfigurationDictionary::profiles_worker(std::string_view worker_id) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const auto& kv) { return kv.first.second == worker_id; });
}

std::vector<std::pair<std::string, OptimalEntry>> ConfigurationDictionary::worker_entries(
    std::string_view worker_id) const {
  std::vector<std::pair<std::string, OptimalEntry>> out;
  for (const auto& [key, entry] : entries_) {
    if (key.second == worker_id) out.emplace_back(key.first, entry);
  }
  return out;
}

const ConfigurationDictionary::WorkerDefault& ConfigurationDictionary::worker_default(
    std::string_view worker_id) const {
  auto it = defaults_.find(worker_id);
  if (it == defaults_.end()) {
    throw Error(ErrorKind::UnknownWorker, "dictionary has no worker '" + std::string(worker_id) + "'");
  }
  return it->second;
}

std::optional<OptimalEntry> ConfigurationDictionary::lookup(std::string_view engine_id,
                                                            std::string_view worker_id) const {
  if (const auto* e = find(engine_id, worker_id)) return *e;
  auto it = defaults_.find(worker_id);
  if (it == defaults_.end()) return std::nullopt;
  return it->second.estimate;
}

ProfileTable::ProfileTable(const std::vector<ProfileRecord>& records, const Cluster& cluster) {
  for (const auto& r : records) {
    check_record(r, cluster);
    auto key = std::make_tuple(r.engine_id, r.worker_id, r.config);
    auto it = index_.find(key);
    if (it == index_.end()) {
      index_.emplace(std::move(key), records_.size());
      records_.push_back(r);
    } else if (better_record(r, records_[it->second], cluster.worker(r.worker_id))) {
      records_[it->second] = r;
    }
  }
}

const ProfileRecord* ProfileTable::find(std::string_view engine_id, std::string_view worker_id,
                                        const ConfigChoice& config) const {
  auto it = index_.find(std::make_tuple(std::string(engine_id), std::string(worker_id), config));
  return it == index_.end() ? nullptr : &records_[it->second];
}

void check_record(const ProfileRecord& r, const Cluster& cluster) {
  const auto* w = cluster.find_worker(r.worker_id);
  if (w == nullptr) throw Error(ErrorKind::UnknownWorker, "record references worker '" + r.worker_id + "'");
  if (!w->has_config(r.config)) {
    throw Error(ErrorKind::UnknownConfig,
                "worker '" + r.worker_id + "' has no config " + r.config.to_string());
  }
  if (r.engine_id.empty()) throw Error(ErrorKind::InvalidRecord, "record with empty engine id");
  if (!(r.qps > 0.0) || !std::isfinite(r.qps)) {
    throw Error(ErrorKind::InvalidRecord, "qps must be positive for " + r.engine_id + "@" + r.worker_id);
  }
  if (!(r.preproc_s >= 0.0) || !std::isfinite(r.preproc_s)) {
    throw Error(ErrorKind::InvalidRecord, "preproc_s must be non-negative for " + r.engine_id + "@" + r.worker_id);
  }
}

bool better_record(const ProfileRecord& a, const ProfileRecord& b, const Worker& worker) {
  if (a.qps != b.qps) return a.qps > b.qps;
  auto ka = resource_key(worker, a.config);
  auto kb = resource_key(worker, b.config);
  auto ta = std::make_tuple(ka.resources, ka.freq_mhz, ka.id, a.preproc_s, a.total_s);
  auto tb = std::make_tuple(kb.resources, kb.freq_mhz, kb.id, b.preproc_s, b.total_s);
  return ta < tb;
}

ConfigChoice unprofiled_default_config(const Worker& worker) {
  if (const auto* ts = std::get_if<ThreadScaling>(&worker.tuning)) {
    const auto& levels = ts->levels;
    return ConfigChoice::threads(levels.size() >= 2 ? levels[levels.size() - 2] : levels.back());
  }
  const auto& modes = std::get<ModeSelection>(worker.tuning).modes;
  std::vector<int> counts;
  for (const auto& m : modes) counts.push_back(m.online_cpus);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  // a single distinct core count has no second-highest; use the highest
  int target = counts.size() >= 2 ? counts[1] : counts[0];
  int top_freq = 0;
  for (const auto& m : modes) top_freq = std::max(top_freq, m.max_cpu_freq_mhz);

  const OperatingMode* best = nullptr;
  auto rank = [&](const OperatingMode& m) {
    double budget = m.power_budget_w.value_or(std::numeric_limits<double>::infinity());
    return std::make_tuple(std::abs(m.online_cpus - target), -m.online_cpus, budget, m.mode_id);
  };
  for (const auto& m : modes) {
    if (m.max_cpu_freq_mhz != top_freq) continue;
    if (best == nullptr || rank(m) < rank(*best)) best = &m;
  }
  return ConfigChoice::mode(best->mode_id);
}

ConfigChoice default_config(const Worker& worker, const ConfigurationDictionary& dictionary) {
  auto entries = dictionary.worker_entries(worker.worker_id);
  if (entries.empty()) return unprofiled_default_config(worker);
  std::map<ConfigChoice, int> votes;
  for (const auto& [engine, entry] : entries) ++votes[entry.config];
  auto rank = [&](const std::pair<const ConfigChoice, int>& v) {
    return std::make_tuple(-v.second, -config_freq(worker, v.first), config_cpus(worker, v.first),
                           v.first.value());
  };
  auto best = votes.begin();
  for (auto it = votes.begin(); it != votes.end(); ++it) {
    if (rank(*it) < rank(*best)) best = it;
  }
  return best->first;
}

ConfigurationDictionary build_dictionary(const std::vector<ProfileRecord>& records,
                                         const Cluster& cluster) {
  ConfigurationDictionary dict;
  std::map<EngineWorkerKey, const ProfileRecord*> winners;
  for (const auto& r : records) {
    check_record(r, cluster);
    auto key = EngineWorkerKey(r.engine_id, r.worker_id);
    auto [it, inserted] = winners.emplace(key, &r);
    if (!inserted && better_record(r, *it->second, cluster.worker(r.worker_id))) it->second = &r;
  }
  for (const auto& [key, r] : winners) {
    dict.entries_.emplace(key, OptimalEntry{r->config, r->qps, r->preproc_s});
  }

  ProfileTable table(records, cluster);
  for (const auto& w : cluster.workers()) {
    ConfigurationDictionary::WorkerDefault d;
    d.config = default_config(w, dict);
    std::vector<double> qps;
    std::vector<double> preproc;
    for (const auto& r : table.records()) {
      if (r.worker_id == w.worker_id && r.config == d.config) {
        qps.push_back(r.qps);
        preproc.push_back(r.preproc_s);
      }
    }
    if (!qps.empty()) d.estimate = OptimalEntry{d.config, median(qps), median(preproc)};
    dict.defaults_.emplace(w.worker_id, d);
  }
  return dict;
}

std::vector<ProfileRecord> synth_profiles(const Cluster& cluster,
                                          const std::vector<EngineSpec>& engines,
                                          std::uint64_t seed, const SynthOptions& opt) {
  Rng rng(seed);
  const double q = cluster.reference_queries();
  const auto n = engines.size();

  // Engines whose x86 throughput stops improving past the second-highest level.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  auto n_saturating = static_cast<std::size_t>(std::llround(opt.saturating_share * static_cast<double>(n)));
  std::vector<bool> saturating(n, false);
  for (std::size_t i = 0; i < n_saturating && i < n; ++i) saturating[order[i]] = true;

  struct EngineDraw {
    double lightness;
    double preproc_s;
  };
  std::vector<EngineDraw> draws;
  for (std::size_t i = 0; i < n; ++i) {
    double lightness = rng.uniform();
    double preproc = opt.preproc_lo_s * std::pow(opt.preproc_hi_s / opt.preproc_lo_s, rng.uniform());
    draws.push_back({lightness, preproc});
  }

  std::vector<ProfileRecord> out;
  for (std::size_t ei = 0; ei < n; ++ei) {
    const auto& engine = engines[ei];
    for (const auto& w : cluster.workers()) {
      Rng local(mix_seed(seed, (ei << 16) | cluster.index_of(w.worker_id)));
      QpsEnvelope env = w.arch == Arch::X86 ? opt.x86_fallback : opt.arm_fallback;
      if (auto it = opt.envelopes.find(w.worker_id); it != opt.envelopes.end()) env = it->second;
      double scale = w.arch == Arch::X86 ? 1.0 : opt.arm_preproc_fallback;
      if (auto it = opt.preproc_scale.find(w.worker_id); it != opt.preproc_scale.end()) scale = it->second;

      double u = std::clamp(0.8 * draws[ei].lightness + 0.2 * local.uniform(), 0.0, 1.0);
      double peak = env.lo * std::pow(env.hi / env.lo, u);
      double preproc = draws[ei].preproc_s * scale;

      auto configs = w.configs();
      std::vector<double> factor(configs.size(), 1.0);
      if (const auto* ts = std::get_if<ThreadScaling>(&w.tuning)) {
        const auto levels = ts->levels.size();
        // Levels beyond the speedup table reuse its last value.
        std::vector<double> base(levels, 1.0);
        for (std::size_t l = 0; l < levels; ++l) {
          base[l] = l < opt.thread_speedups.size() ? opt.thread_speedups[l] : base[l - 1];
        }
        double sat = levels >= 2 ? base[levels - 2] : base[0];
        double k = static_cast<double>(n_saturating);
        double gain = 1.0;
        if (n > n_saturating && levels >= 2) {
          gain = (opt.top_speedup * static_cast<double>(n) / sat - k) / (static_cast<double>(n) - k);
        }
        for (std::size_t l = 0; l < levels; ++l) {
          double f = base[l];
          if (l + 1 == levels && levels >= 2) f = saturating[ei] ? sat : sat * gain;
          if (l > 0) f *= 1.0 + opt.jitter * (2.0 * local.uniform() - 1.0);
          factor[l] = f;
        }
        for (std::size_t l = 1; l < levels; ++l) factor[l] = std::max(factor[l], factor[l - 1]);
        if (saturating[ei] && levels >= 2) factor[levels - 1] = factor[levels - 2];
      } else {
        const auto& modes = std::get<ModeSelection>(w.tuning).modes;
        int fmax = 0;
        int cmax = 0;
        for (const auto& m : modes) {
          fmax = std::max(fmax, m.max_cpu_freq_mhz);
          cmax = std::max(cmax, m.online_cpus);
        }
        for (std::size_t i = 0; i < modes.size(); ++i) {
          double f = std::pow(double(modes[i].max_cpu_freq_mhz) / fmax, opt.freq_exponent) *
                     std::pow(double(modes[i].online_cpus) / cmax, opt.cpu_exponent);
          factor[i] = f * (1.0 + opt.jitter * (2.0 * local.uniform() - 1.0));
        }
        // Non-decreasing in frequency: every mode is at least as fast as any
        // lower-frequency mode.
        for (std::size_t i = 0; i < modes.size(); ++i) {
          for (std::size_t j = 0; j < modes.size(); ++j) {
            if (modes[j].max_cpu_freq_mhz < modes[i].max_cpu_freq_mhz) {
              factor[i] = std::max(factor[i], factor[j]);
            }
          }
        }
      }
      double top = *std::max_element(factor.begin(), factor.end());
      for (std::size_t i = 0; i < configs.size(); ++i) {
        double qps = peak * factor[i] / top;
        out.push_back({engine.engine_id, w.worker_id, configs[i], qps, preproc, preproc + q / qps});
      }
    }
  }
  return out;
}

std::string dump_profiles(const std::vector<ProfileRecord>& records) {
  std::string out = "engine_id,worker_id,config,qps,preproc_s,total_s\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{}\n", r.engine_id, r.worker_id, r.config.to_string(), r.qps,
                       r.preproc_s, r.total_s);
  }
  return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, where + "bad number '" + text + "'");
  }
}

}  // namespace

std::vector<ProfileRecord> parse_profiles(const std::string& text, const Cluster& cluster,
                                          const std::string& source) {
  std::vector<ProfileRecord> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("engine_id", 0) == 0) continue;
    }
    auto where = source + ":" + std::to_string(line_no) + ": ";
    auto cells = split_csv(line);
    if (cells.size() != 6) throw Error(ErrorKind::Parse, where + "expected 6 columns");
    ProfileRecord r;
    r.engine_id = cells[0];
    r.worker_id = cells[1];
    try {
      r.config = ConfigChoice::parse(cells[2]);
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, where + e.what());
    }
    r.qps = parse_double(cells[3], where);
    r.preproc_s = parse_double(cells[4], where);
    r.total_s = parse_double(cells[5], where);
    try {
      check_record(r, cluster);
    } catch (const Error& e) {
      throw Error(e.kind(), where + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ProfileRecord> load_profiles(const std::filesystem::path& path, const Cluster& cluster) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open profile file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_profiles(buf.str(), cluster, path.string());
}

void save_profiles(const std::vector<ProfileRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write profile file " + path.string());
  out << dump_profiles(records);
}

std::string dictionary_to_json(const ConfigurationDictionary& dictionary) {
  nlohmann::ordered_json doc;
  doc["entries"] = nlohmann::ordered_json::array();
  for (const auto& [key, e] : dictionary.entries()) {
    doc["entries"].push_back({{"engine_id", key.first},
                              {"worker_id", key.second},
                              {"config", e.config.to_string()},
                              {"qps", e.qps},
                              {"preproc_s", e.preproc_s}});
  }
  doc["defaults"] = nlohmann::ordered_json::array();
  for (const auto& [worker, d] : dictionary.defaults()) {
    nlohmann::ordered_json row = {{"worker_id", worker}, {"config", d.config.to_string()}};
    if (d.estimate) {
      row["qps"] = d.estimate->qps;
      row["preproc_s"] = d.estimate->preproc_s;
    }
    doc["defaults"].push_back(row);
  }
  return doc.dump(2) + "\n";
}

ConfigurationDictionary dictionary_from_json(const std::string& text, const Cluster& cluster) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("dictionary: ") + e.what());
  }
  ConfigurationDictionary dict;
  try {
    for (const auto& row : doc.at("entries")) {
      OptimalEntry e{ConfigChoice::parse(row.at("config").get<std::string>()), row.at("qps").get<double>(),
                     row.at("preproc_s").get<double>()};
      ProfileRecord probe{row.at("engine_id").get<std::string>(), row.at("worker_id").get<std::string>(),
                          e.config, e.qps, e.preproc_s, 0.0};
      check_record(probe, cluster);
      dict.entries_[{probe.engine_id, probe.worker_id}] = e;
    }
    for (const auto& row : doc.at("defaults")) {
      ConfigurationDictionary::WorkerDefault d;
      d.config = ConfigChoice::parse(row.at("config").get<std::string>());
      auto worker = row.at("worker_id").get<std::string>();
      if (!cluster.worker(worker).has_config(d.config)) {
        throw Error(ErrorKind::UnknownConfig, worker + " has no config " + d.config.to_string());
      }
      if (row.contains("qps")) {
        d.estimate = OptimalEntry{d.config, row.at("qps").get<double>(), row.at("preproc_s").get<double>()};
      }
      dict.defaults_[worker] = d;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("dictionary: ") + e.what());
  }
  for (const auto& w : cluster.workers()) {
    if (!dict.defaults_.count(w.worker_id)) {
      dict.defaults_[w.worker_id] = {default_config(w, dict), std::nullopt};
    }
  }
  return dict;
}

}  // namespace edgesched
