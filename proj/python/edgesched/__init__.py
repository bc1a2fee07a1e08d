# Copyright 2026 The edgesched Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""QoS-aware inference scheduling simulator (Python bindings)."""

import json

from ._core import (
    Cluster,
    ConfigChoice,
    ConfigurationDictionary,
    EdgeschedError,
    ProfileRecord,
    build_dictionary,
    default_cluster,
    dictionary_from_json,
    dump_profiles,
    gen_trace_csv,
    load_cluster,
    oracle_check,
    parse_cluster,
    parse_profiles,
    policies,
    synth_profiles,
)
from . import _core

__all__ = [
    "Cluster",
    "ConfigChoice",
    "ConfigurationDictionary",
    "EdgeschedError",
    "ProfileRecord",
    "build_dictionary",
    "compare",
    "default_cluster",
    "dictionary_from_json",
    "dump_profiles",
    "gen_trace_csv",
    "load_cluster",
    "oracle_check",
    "parse_cluster",
    "parse_profiles",
    "policies",
    "run_experiment",
    "run_policy",
    "synth_profiles",
]


def run_policy(cluster, records, regime, policy, seed=1, n_jobs=24, tick_s=5.0, exec_noise=0.0, noise_seed=0):
    """Simulate one policy on one (regime, seed) trace; returns the report as a dict."""
    text = _core.run_policy_json(cluster, records, regime, policy, seed, n_jobs, tick_s, exec_noise, noise_seed)
    return json.loads(text)


def run_experiment(config_yaml="", out_dir=None):
    """Run a full experiment from YAML text. Returns (reports, summary) as dicts."""
    reports, summary = _core.run_experiment_json(config_yaml, out_dir)
    return [json.loads(r) for r in reports], json.loads(summary)


def compare(reports, cluster_path=None):
    """Seed-averaged comparison of report dicts against SynergAI."""
    return json.loads(_core.compare_json([json.dumps(r) for r in reports], cluster_path))
