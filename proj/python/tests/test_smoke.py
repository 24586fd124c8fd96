# Copyright 2026 The nbnoma Authors
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

import math

import pytest

import nbnoma


def small_config(urllc=3, mmtc=5, subcarriers=12, seed=7):
    c = nbnoma.ScenarioConfig()
    c.num_urllc = urllc
    c.num_mmtc = mmtc
    c.num_subcarriers = subcarriers
    c.num_clusters = math.ceil((urllc + mmtc) / c.max_rank)
    c.rng_seed = seed
    return c


def test_reference_defaults():
    c = nbnoma.ScenarioConfig()
    assert (c.num_urllc, c.num_mmtc, c.num_subcarriers) == (24, 72, 48)
    assert c.mmtc_rate_threshold_range == (100.0, 2000.0)
    assert c.noise_power == pytest.approx(10 ** (-173 / 10) * 1e-3 * 3750)


def test_config_text_round_trip():
    c = nbnoma.parse_config("num_urllc = 2\nnum_mmtc = 4\nnum_subcarriers = 6\n")
    assert c.num_clusters == 3
    again = nbnoma.parse_config(nbnoma.format_config(c))
    assert again.num_devices == 6


def test_pipeline_validates_cleanly():
    s = nbnoma.generate_scenario(small_config())
    assert s.num_devices == 8
    assert s.devices[0].kind == "urllc"
    a = nbnoma.build_clusters(s)
    r = nbnoma.allocate(s, a)
    assert len(r.owner) == 12
    assert nbnoma.validate(s, a, r) == []
    assert nbnoma.sic_chain_gap(s, a, r) <= 1e-9
    assert r.report.sum_rate == pytest.approx(sum(r.report.rate))
    assert 0.0 <= r.report.fairness <= 1.0


def test_orthogonal_baselines():
    s = nbnoma.generate_scenario(small_config())
    ofdma = nbnoma.ofdma_allocate(s)
    fast = nbnoma.fast_ofdm_allocate(s)
    assert ofdma.num_subcarriers == 12
    assert fast.num_subcarriers == 24
    assert nbnoma.validate_orthogonal(s, ofdma) == []
    assert ofdma.report.satisfied_count <= 8


def test_solve_power_matches_hand_example():
    sol = nbnoma.solve_power([1.0, 2.0], [0.0, 0.0], pmax=1.0)
    assert sol.converged
    assert sol.powers == pytest.approx([0.5, 0.5], abs=1e-6)
    grid = nbnoma.grid_power_oracle([1.0, 2.0], [0.0, 0.0], 1.0, step=1e-3)
    assert sol.objective >= grid.objective * (1 - 1e-9)


def test_z_transform_round_trip():
    p = [0.3, 0.2, 0.05]
    z = nbnoma.to_z(p)
    assert z == pytest.approx([0.55, 0.25, 0.05])
    assert nbnoma.from_z(z) == pytest.approx(p, abs=1e-15)


def test_errors_carry_code():
    with pytest.raises(nbnoma.NomaError, match="infeasible"):
        nbnoma.solve_power([1.0, 2.0], [50.0, 50.0], pmax=1.0)
    with pytest.raises(nbnoma.NomaError, match="invalid-config"):
        nbnoma.parse_config("num_urllc = -1\n")
    with pytest.raises(nbnoma.NomaError, match="degenerate-input"):
        nbnoma.jain_fairness([])


def test_experiment_is_deterministic_and_csv_sorted():
    c = small_config()
    one = nbnoma.run_experiment(c, trials=3, seed=5, workers=1)
    two = nbnoma.run_experiment(c, trials=3, seed=5, workers=2)
    assert nbnoma.format_csv(one) == nbnoma.format_csv(two)
    assert {r.scheme for r in one} == {"noma", "ofdma", "fast_ofdm"}
    assert all(r.runtime_s == 0.0 for r in one)
    lines = nbnoma.format_csv(one).splitlines()
    assert lines[0].startswith("seed,scheme,sweep_value,sum_rate")
    assert len(lines) == 1 + 9


def test_sweep_over_device_count():
    rows = nbnoma.run_experiment(small_config(), trials=2, schemes="noma",
                                 sweep_variable="total_devices",
                                 sweep_values=[8, 12], check=True)
    assert sorted({r.sweep_value for r in rows}) == [8.0, 12.0]
    assert all(r.violations == 0 for r in rows if not r.error)


def test_self_checks_pass():
    outcomes = nbnoma.run_self_checks(small_config(), instances=20, seed=3)
    assert outcomes and all(o.passed for o in outcomes)
