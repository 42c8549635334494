import json

import numpy as np
import pytest

from oracles import central_difference
from topalign.align import (
    ABLATION_SETTINGS,
    OptimizerConfig,
    StudentMap,
    ablation_suite,
    ablation_table,
    alignment_metrics,
    optimize,
)
from topalign.errors import DivergenceError, InvalidInput
from topalign.fixtures import noisy_student
from topalign.io import dumps
from topalign.losses import LossCoefficients, loss_total
from topalign.transport import ProjectionSampler


def test_affine_chain_rule():
    t, s = noisy_student(1, n_points=10, dim=3)
    rng = np.random.default_rng(0)
    w0, b0 = np.eye(3) + 0.1 * rng.standard_normal((3, 3)), 0.1 * rng.standard_normal(3)
    sampler = ProjectionSampler(0, 30, 2)

    def f(params):
        m = StudentMap.affine(s, params[:9].reshape(3, 3), params[9:])
        return loss_total(t, m.apply(), LossCoefficients(), 2, sampler).l_total

    m = StudentMap.affine(s, w0, b0)
    g = loss_total(t, m.apply(), LossCoefficients(), 2, sampler, with_grad=True).grad_student
    lr = 1e-3
    stepped = m.copy()
    stepped.descend(g, lr)
    fd = central_difference(f, np.concatenate([w0.ravel(), b0]))
    assert np.allclose((m.weight - stepped.weight) / lr, fd[:9].reshape(3, 3), rtol=1e-6, atol=1e-9)
    assert np.allclose((m.bias - stepped.bias) / lr, fd[9:], rtol=1e-6, atol=1e-9)


def test_student_map_validation():
    with pytest.raises(InvalidInput):
        StudentMap.affine(np.zeros((3, 2)), weight=np.eye(3))
    with pytest.raises(InvalidInput):
        StudentMap("spline", np.zeros((2, 2)))
    with pytest.raises(InvalidInput):
        OptimizerConfig(steps=0)


def test_optimize_logs_and_is_deterministic():
    t, s = noisy_student(2, n_points=16, dim=4)
    cfg = OptimizerConfig(steps=20, log_every=5)
    m1, r1 = optimize(t, s, config=cfg)
    m2, r2 = optimize(t, s, config=cfg)
    assert [e["step"] for e in r1.steps] == [0, 5, 10, 15, 20]
    assert np.array_equal(m1.apply(), m2.apply())
    assert dumps(r1.as_dict()) == dumps(r2.as_dict())
    assert r1.steps[-1]["l_total"] < r1.steps[0]["l_total"]
    assert json.loads(dumps(r1.as_dict()))["config"]["student_map"] == "free"


def test_optimize_does_not_mutate_inputs():
    t, s = noisy_student(3, n_points=8, dim=2)
    before = s.points.copy()
    smap = StudentMap.affine(s)
    optimize(t, s, smap, OptimizerConfig(steps=3))
    assert np.array_equal(s.points, before) and np.array_equal(smap.weight, np.eye(2))


def test_divergence_reported_with_step():
    t, s = noisy_student(4, n_points=8, dim=2)
    with pytest.raises(DivergenceError) as exc:
        optimize(t, s, config=OptimizerConfig(steps=200, learning_rate=1e6))
    assert exc.value.step > 0


def test_shape_mismatch_rejected():
    t, _ = noisy_student(0, n_points=8, dim=2)
    with pytest.raises(InvalidInput):
        optimize(t, np.zeros((8, 3)))


def test_metrics_zero_for_identical_clouds():
    t, _ = noisy_student(0, n_points=12, dim=3)
    m = alignment_metrics(t, t)
    assert all(v == 0.0 for v in m.values())


def test_ablation_suite_covers_settings():
    t, s = noisy_student(5, n_points=10, dim=3)
    reports = ablation_suite(t, s, OptimizerConfig(steps=5, log_every=5))
    assert list(reports) == list(ABLATION_SETTINGS)
    rows = ablation_table(reports)
    assert [r["setting"] for r in rows] == list(ABLATION_SETTINGS)
    assert rows[0]["beta"] == 0.0 and rows[3]["gamma"] == 0.01
