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

import pytest

import edgesched as es


def test_cluster_and_profiles():
    c = es.default_cluster()
    assert c.worker_ids == ["x86", "agx", "nx"]
    assert len(c.engine_ids) == 12
    records = es.synth_profiles(c, 3)
    assert len(records) == 12 * 20
    assert es.parse_profiles(es.dump_profiles(records), c)[5].qps == records[5].qps
    d = es.build_dictionary(records, c)
    assert len(d) == 36
    assert d.default_config("nx") == "mode:9"
    hit = d.lookup(c.engine_ids[0], "x86")
    assert hit["qps"] > 0


def test_estimate_through_custom_records():
    c = es.default_cluster()
    rec = es.ProfileRecord("e", "x86", "threads:4", 50.0, 2.0, 2.0 + 1024 / 50.0)
    d = es.build_dictionary([rec], c)
    assert d.lookup("e", "x86") == {"config": "threads:4", "qps": 50.0, "preproc_s": 2.0}
    assert d.lookup("e", "agx") is None


def test_run_policy_is_deterministic():
    c = es.default_cluster()
    records = es.synth_profiles(c, 1)
    a = es.run_policy(c, records, "DH-FH", "synergai", seed=1)
    b = es.run_policy(c, records, "DH-FH", "synergai", seed=1)
    assert a == b
    assert a["jobs"] == 24
    assert len(a["jobs_detail"]) == 24
    srr = es.run_policy(c, records, "DH-FH", "srr", seed=1)
    assert a["violations"] <= srr["violations"]


def test_experiment_and_compare(tmp_path):
    reports, summary = es.run_experiment("regimes: [DL-FL]\nseeds: [1, 2]\nthreads: 1\n", str(tmp_path))
    assert len(reports) == 2 * len(es.policies())
    assert (tmp_path / "summary.json").exists()
    again = es.compare(reports)
    assert again == summary
    assert summary["regimes"][0]["policies"][0]["policy"] == "synergai"


def test_oracle_and_errors():
    c = es.default_cluster()
    records = es.synth_profiles(c, 0)
    check = es.oracle_check(c, records, instances=50)
    assert check["dominance_failures"] == 0
    assert check["equal_fraction"] >= 0.6
    with pytest.raises(es.EdgeschedError):
        es.oracle_check(c, records, instances=1, max_jobs=7)
    with pytest.raises(es.EdgeschedError):
        es.run_policy(c, records, "DX-FL", "rr")
    with pytest.raises(es.EdgeschedError):
        es.parse_cluster("workers: 3\n")
