# Copyright 2026 The homsync Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import json
import math

import numpy as np
import pytest

import homsync


def test_hom_identity():
    out = homsync.beam_splitter_apply(homsync.fock_state(5, 1, 1), 0.5)
    np.testing.assert_allclose(out, homsync.hom_state(5), atol=1e-12)
    assert abs(homsync.log_negativity(homsync.hom_state(5)) - 1.0) < 1e-9


def test_dip_overlap():
    for c in (0.0, 0.5, 0.992, 1.0):
        rho = homsync.hom_with_overlap([0, 1], [0, 1], c)
        assert abs(rho[7, 7].real - (1 - c) / 2) < 1e-10


def test_metrics_dict():
    m = homsync.compute_metrics(homsync.hom_state(5))
    assert m["visibility"] == pytest.approx(1.0)
    assert m["filter_fraction"] == pytest.approx(1.0)
    assert m["input_purities"] == pytest.approx((1.0, 1.0))


def test_clover_origin():
    assert abs(homsync.joint_density(homsync.hom_state(5), 0, 0, 0, 0)) < 1e-12
    ring = homsync.joint_density(homsync.hom_state(5, math.pi / 2), 0, 0, 0, 0)
    assert ring == pytest.approx(1 / math.pi, abs=1e-9)


def test_wigner_slice_shape():
    values = homsync.wigner_slice(homsync.hom_state(5), "x1", "x2", -2.0, 2.0, 0.5)
    assert values.shape == (9, 9)
    assert values[4, 4] > 0


def test_round_trip_small():
    records = homsync.sample_records(homsync.hom_state(3), 20000, 7)
    assert records.shape == (20000, 4)
    again = homsync.sample_records(homsync.hom_state(3), 20000, 7)
    np.testing.assert_array_equal(records, again)
    r = homsync.reconstruct(records, n_max=3)
    assert r["converged"]
    psi = np.zeros(16)
    psi[8], psi[2] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    assert psi @ r["rho"].real @ psi > 0.9


def test_sync_and_rates():
    assert homsync.analytic_dual_rate(3200, 3200, 0.4, 1.8) == pytest.approx(92.16)
    summary, events = homsync.simulate_dual_heralds(json.dumps({"total_time_s": 5.0}), seed=3)
    doc = json.loads(summary)
    assert doc["n_events"] == events.shape[0]
    assert homsync.enhancement_factor(1800.0, 72.0) == 25.0
    assert homsync.purity_vs_storage(0.602, 2300.0, 0.0) == pytest.approx(0.602)


def test_errors_map_to_python():
    with pytest.raises(homsync.ConfigError):
        homsync.hom_with_overlap([0, 1], [0, 1], 1.5)
    with pytest.raises(ValueError):
        homsync.log_negativity(np.eye(5, dtype=complex))
    with pytest.raises(homsync.NumericalError):
        homsync.local_filter(homsync.fock_state(5, 1, 1))
