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

#include <filesystem>
#include <string>

#include "edgesched/cluster.hpp"

namespace edgesched {

/// Parses a cluster document (YAML). Errors carry `<source>:<line>:` so a bad
/// entry can be located; `source` is only used for messages.
Cluster parse_cluster(const std::string& text, const std::string& source = "<cluster>");
Cluster load_cluster(const std::filesystem::path& path);

std::string dump_cluster(const Cluster& cluster);
void save_cluster(const Cluster& cluster, const std::filesystem::path& path);

}  // namespace edgesched
