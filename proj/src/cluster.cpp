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

#include "edgesched/cluster.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace edgesched {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyCluster: return "EmptyCluster";
    case ErrorKind::DuplicateWorkerId: return "DuplicateWorkerId";
    case ErrorKind::DuplicateEngineId: return "DuplicateEngineId";
    case ErrorKind::InvalidTuning: return "InvalidTuning";
    case ErrorKind::UnknownWorker: return "UnknownWorker";
    case ErrorKind::UnknownEngine: return "UnknownEngine";
    case ErrorKind::UnknownConfig: return "UnknownConfig";
    case ErrorKind::InvalidRecord: return "InvalidRecord";
    case ErrorKind::EmptyProfileSet: return "EmptyProfileSet";
    case ErrorKind::NoEntryAndNoDefault: return "NoEntryAndNoDefault";
    case ErrorKind::ClockRegression: return "ClockRegression";
    case ErrorKind::EmptyRun: return "EmptyRun";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::UnschedulableJob: return "UnschedulableJob";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

std::string_view to_string(Arch arch) { return arch == Arch::X86 ? "x86" : "arm"; }

Arch parse_arch(std::string_view text) {
  if (text == "x86") return Arch::X86;
  if (text == "arm") return Arch::Arm;
  throw Error(ErrorKind::Parse, "unknown arch '" + std::string(text) + "'");
}

ConfigChoice ConfigChoice::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorKind::Parse, "config '" + std::string(text) + "' lacks ':'");
  }
  auto kind = text.substr(0, colon);
  auto number = text.substr(colon + 1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc() || ptr != number.data() + number.size()) {
    throw Error(ErrorKind::Parse, "config '" + std::string(text) + "' has a bad number");
  }
  if (kind == "threads") return threads(value);
  if (kind == "mode") return mode(value);
  throw Error(ErrorKind::Parse, "config '" + std::string(text) + "' has unknown kind");
}

std::string ConfigChoice::to_string() const {
  return (is_threads() ? "threads:" : "mode:") + std::to_string(value_);
}

bool Worker::has_config(const ConfigChoice& config) const {
  if (const auto* ts = std::get_if<ThreadScaling>(&tuning)) {
    return config.is_threads() &&
           std::find(ts->levels.begin(), ts->levels.end(), config.value()) !=
               ts->levels.end();
  }
  const auto& ms = std::get<ModeSelection>(tuning);
  return config.is_mode() &&
         std::any_of(ms.modes.begin(), ms.modes.end(),
                     [&](const OperatingMode& m) { return m.mode_id == config.value(); });
}

std::vector<ConfigChoice> Worker::configs() const {
  std::vector<ConfigChoice> out;
  if (const auto* ts = std::get_if<ThreadScaling>(&tuning)) {
    for (int n : ts->levels) out.push_back(ConfigChoice::threads(n));
  } else {
    for (const auto& m : std::get<ModeSelection>(tuning).modes) {
      out.push_back(ConfigChoice::mode(m.mode_id));
    }
  }
  return out;
}

const OperatingMode& Worker::mode(int mode_id) const {
  if (const auto* ms = std::get_if<ModeSelection>(&tuning)) {
    for (const auto& m : ms->modes) {
      if (m.mode_id == mode_id) return m;
    }
  }
  throw Error(ErrorKind::UnknownConfig,
              "worker '" + worker_id + "' has no mode " + std::to_string(mode_id));
}

const Worker& Cluster::worker(std::string_view worker_id) const {
  if (const auto* w = find_worker(worker_id)) return *w;
  throw Error(ErrorKind::UnknownWorker, "no worker '" + std::string(worker_id) + "'");
}

const Worker* Cluster::find_worker(std::string_view worker_id) const {
  for (const auto& w : workers_) {
    if (w.worker_id == worker_id) return &w;
  }
  return nullptr;
}

std::size_t Cluster::index_of(std::string_view worker_id) const {
  for (std::size_t i = 0; i < workers_.size(); ++i) {
    if (workers_[i].worker_id == worker_id) return i;
  }
  throw Error(ErrorKind::UnknownWorker, "no worker '" + std::string(worker_id) + "'");
}

const EngineSpec* Cluster::find_engine(std::string_view engine_id) const {
  for (const auto& e : engines_) {
    if (e.engine_id == engine_id) return &e;
  }
  return nullptr;
}

Cluster Cluster::with_maxn_substitute(double watts) const {
  return validate_cluster(workers_, engines_, watts, reference_queries_);
}

Cluster Cluster::with_reference_queries(int q) const {
  return validate_cluster(workers_, engines_, maxn_substitute_w_, q);
}

namespace {

void check_tuning(const Worker& w) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::InvalidTuning, "worker '" + w.worker_id + "': " + why);
  };
  if (const auto* ts = std::get_if<ThreadScaling>(&w.tuning)) {
    if (w.arch != Arch::X86) fail("thread scaling requires an x86 worker");
    if (ts->levels.empty()) fail("empty thread levels");
    if (ts->levels.front() < 1) fail("thread levels must start at 1 or above");
    for (std::size_t i = 1; i < ts->levels.size(); ++i) {
      if (ts->levels[i] <= ts->levels[i - 1]) fail("thread levels must be strictly increasing");
    }
    return;
  }
  const auto& ms = std::get<ModeSelection>(w.tuning);
  if (w.arch != Arch::Arm) fail("mode selection requires an arm worker");
  if (ms.modes.empty()) fail("empty mode list");
  std::set<int> ids;
  for (const auto& m : ms.modes) {
    if (!ids.insert(m.mode_id).second) fail("duplicate mode " + std::to_string(m.mode_id));
    if (m.max_cpu_freq_mhz <= 0) fail("mode " + std::to_string(m.mode_id) + " frequency must be positive");
    if (m.online_cpus < 1) fail("mode " + std::to_string(m.mode_id) + " needs at least one cpu");
    if (m.power_budget_w && !(*m.power_budget_w > 0.0)) {
      fail("mode " + std::to_string(m.mode_id) + " power budget must be positive");
    }
  }
}

}  // namespace

void check_worker(const Worker& w) {
  if (w.worker_id.empty()) throw Error(ErrorKind::InvalidTuning, "worker with empty id");
  if (!(w.nominal_power_w > 0.0)) {
    throw Error(ErrorKind::InvalidTuning, "worker '" + w.worker_id + "' needs positive nominal power");
  }
  check_tuning(w);
}

Cluster validate_cluster(std::vector<Worker> workers, std::vector<EngineSpec> engines,
                         double maxn_substitute_w, int reference_queries) {
  if (workers.empty()) throw Error(ErrorKind::EmptyCluster, "cluster has no workers");
  std::set<std::string> ids;
  for (const auto& w : workers) {
    check_worker(w);
    if (!ids.insert(w.worker_id).second) {
      throw Error(ErrorKind::DuplicateWorkerId, "worker '" + w.worker_id + "' listed twice");
    }
  }
  std::set<std::string> engine_ids;
  for (const auto& e : engines) {
    if (!engine_ids.insert(e.engine_id).second) {
      throw Error(ErrorKind::DuplicateEngineId, "engine '" + e.engine_id + "' listed twice");
    }
  }
  if (!(maxn_substitute_w > 0.0)) {
    throw Error(ErrorKind::InvalidTuning, "MAXN substitute must be positive");
  }
  if (reference_queries < 1) {
    throw Error(ErrorKind::InvalidTuning, "reference query count must be at least 1");
  }
  Cluster c;
  c.workers_ = std::move(workers);
  c.engines_ = std::move(engines);
  c.maxn_substitute_w_ = maxn_substitute_w;
  c.reference_queries_ = reference_queries;
  return c;
}

double nominal_power(const Cluster& cluster, const Worker& worker, const ConfigChoice& config) {
  if (!worker.has_config(config)) {
    throw Error(ErrorKind::UnknownConfig,
                "worker '" + worker.worker_id + "' has no config " + config.to_string());
  }
  if (worker.arch == Arch::X86) return worker.nominal_power_w;
  const auto& m = worker.mode(config.value());
  return m.power_budget_w.value_or(cluster.maxn_substitute_w());
}

Cluster default_cluster() {
  Worker x86{"x86", Arch::X86, ThreadScaling{{1, 2, 4, 8, 16}}, 105.0, 16, 16};
  Worker agx{"agx", Arch::Arm,
             ModeSelection{{
                 {1, 1200, 8, 30.0},
                 {2, 1450, 6, 30.0},
                 {3, 1780, 4, 30.0},
                 {4, 2100, 2, 30.0},
                 {5, 2188, 4, 15.0},
                 {6, 2266, 8, std::nullopt},
             }},
             30.0, 8, 32};
  Worker nx{"nx", Arch::Arm,
            ModeSelection{{
                {1, 1200, 4, 10.0},
                {2, 1400, 4, 15.0},
                {3, 1400, 4, 20.0},
                {4, 1400, 6, 15.0},
                {5, 1400, 6, 20.0},
                {6, 1500, 2, 10.0},
                {7, 1900, 2, 15.0},
                {8, 1900, 2, 20.0},
                {9, 1900, 4, 10.0},
            }},
            20.0, 6, 8};

  std::vector<EngineSpec> engines = {
      {"tf-resnet50", "image-classification", "tensorflow", "ResNet50", "ImageNet", 76.456},
      {"tf-mobilenet", "image-classification", "tensorflow", "MobileNet", "ImageNet", 71.676},
      {"tf-mobilenet-q", "image-classification", "tensorflow", "MobileNet Quantized", "ImageNet", 70.694},
      {"tfl-mobilenet", "image-classification", "tflite", "MobileNet", "ImageNet", 71.676},
      {"tfl-mobilenet-q", "image-classification", "tflite", "MobileNet Quantized", "ImageNet", 70.762},
      {"onnx-resnet50-op8", "image-classification", "onnxruntime", "ResNet50 opset-8", "ImageNet", 76.456},
      {"onnx-resnet50-op11", "image-classification", "onnxruntime", "ResNet50 opset-11", "ImageNet", 76.456},
      {"onnx-mobilenet-op8", "image-classification", "onnxruntime", "MobileNet opset-8", "ImageNet", 71.676},
      {"onnx-mobilenet-op11", "image-classification", "onnxruntime", "MobileNet opset-11", "ImageNet", 71.676},
      {"tf-ssd-mobilenet", "object-detection", "tensorflow", "SSDMobileNet", "Coco 300", 0.234},
      {"onnx-ssd-mobilenet-op8", "object-detection", "onnxruntime", "SSDMobileNet opset-8", "Coco 300", 0.23},
      {"onnx-ssd-mobilenet-op11", "object-detection", "onnxruntime", "SSDMobileNet opset-11", "Coco 300", 0.23},
  };
  return validate_cluster({std::move(x86), std::move(agx), std::move(nx)}, std::move(engines));
}

}  // namespace edgesched
