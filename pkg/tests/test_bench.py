import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from topalign.bench import SweepConfig, run_bound_campaign, run_k_sweep, run_sweep, run_timing_sweep
from topalign.fixtures import noisy_student


def small_config(**kw):
    base = dict(dimension=16, sizes=(16, 32), lambdas=(1.0, 0.5, 0.0, -1.0), trials=3, master_seed=1)
    base.update(kw)
    return SweepConfig(**base)


def strip_time(report):
    return [(c.distribution, c.N, c.lam, c.mean_components, c.mean_sparsity) for c in report.cells]


def test_sweep_determinism_and_monotonicity():
    a, b = run_sweep(small_config()), run_sweep(small_config())
    assert strip_time(a) == strip_time(b)
    for dist in ("uniform", "gaussian"):
        for n in (16, 32):
            cells = [a.cell(dist, n, lam) for lam in (1.0, 0.5, 0.0, -1.0)]
            spars = [c.mean_sparsity for c in cells]
            comps = [c.mean_components for c in cells]
            assert spars == sorted(spars) and comps == sorted(comps, reverse=True)
            assert all(c.mean_components >= 1 for c in cells)


def test_sweep_csv_layout():
    rep = run_sweep(small_config(distributions=("uniform",), sizes=(8,), lambdas=(0.5,), trials=1))
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert rows[0] == ["distribution", "N", "lambda", "mean_components", "mean_sparsity", "mean_seconds"]
    assert rows[1][:3] == ["uniform", "8", "0.5"]
    assert rep.as_dict()["config"]["trials"] == 1


def test_sweep_config_validation():
    with pytest.raises(ValueError):
        SweepConfig(distributions=("cauchy",))
    with pytest.raises(ValueError):
        SweepConfig(trials=0)


def test_very_negative_lambda_keeps_every_edge():
    rep = run_sweep(small_config(lambdas=(-100.0,), trials=1))
    assert all(c.mean_sparsity == 1.0 and c.mean_components == 1.0 for c in rep.cells)


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**32))
def test_bound_campaign_never_violates(seed):
    res = run_bound_campaign(trials=20, max_n=20, master_seed=seed)
    s = res.summary()
    assert s["violations"] == 0 and s["bound_form_mismatches"] == 0 and s["component_mismatches"] == 0
    assert s["max_wp_over_bound"] <= 1.0 + 1e-9


def test_bound_campaign_deterministic():
    a = run_bound_campaign(trials=15, max_n=16, master_seed=3)
    b = run_bound_campaign(trials=15, max_n=16, master_seed=3)
    assert [c.as_dict() for c in a.certificates] == [c.as_dict() for c in b.certificates]


def test_timing_sweep_shape():
    rows = run_timing_sweep(N=16, n=8, lambdas=(0.0, 1.0), trials=2)
    assert [r[0] for r in rows] == [0.0, 1.0] and all(r[1] > 0 for r in rows)


def test_k_sweep_identical_clouds_zero():
    t, _ = noisy_student(0, n_points=12, dim=3)
    rows = run_k_sweep(t, t, ks=(5, 10), seeds_per_k=4, timing_repeats=1)
    assert [r.K for r in rows] == [5, 10]
    assert all(r.mean_swd == 0.0 and r.stderr == 0.0 for r in rows)


def test_k_sweep_spread_shrinks():
    t, s = noisy_student(0, n_points=24, dim=4)
    rows = run_k_sweep(t, s, ks=(5, 80), seeds_per_k=40, timing_repeats=1)
    assert rows[1].stderr < rows[0].stderr
    assert np.isclose(rows[0].mean_swd, rows[1].mean_swd, rtol=0.1)


def test_subset_sweep_reproduces_full_grid_cells():
    full = run_sweep(small_config(trials=2))
    part = run_sweep(small_config(trials=2, distributions=("gaussian",), sizes=(32,)))
    for c in part.cells:
        ref = full.cell(c.distribution, c.N, c.lam)
        assert (c.mean_components, c.mean_sparsity) == (ref.mean_components, ref.mean_sparsity)
