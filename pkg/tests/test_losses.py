import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import central_difference
from topalign.errors import InvalidInput
from topalign.fixtures import random_orthogonal
from topalign.geometry import ThresholdRule, pairwise_distances
from topalign.losses import LossCoefficients, h0_structure, loss_dm, loss_pw, loss_ta, loss_total
from topalign.transport import ProjectionSampler


def pair(seed, n=12, dim=3, noise=0.3):
    rng = np.random.default_rng(seed)
    t = rng.standard_normal((n, dim))
    return t, t + noise * rng.standard_normal((n, dim))


def test_identical_clouds_give_zero_everything():
    t, _ = pair(0)
    lb = loss_total(t, t.copy(), with_grad=True)
    assert (lb.l_pw, lb.l_ta, lb.l_dm, lb.l_total) == (0.0, 0.0, 0.0, 0.0)
    assert not lb.grad_student.any()


def test_hand_computed_two_point_losses():
    t = np.array([[0.0, 0.0], [1.0, 0.0]])
    s = np.array([[0.0, 0.0], [3.0, 0.0]])
    assert loss_pw(t, s) == pytest.approx(1.0)  # (2^2) / 4 entries
    assert loss_dm(t, s) == pytest.approx(2.0)  # two off-diagonal gaps of 2 over 4 entries
    # one finite death each: (0,1) and (0,3); every projection sees a gap of 2 |theta_2|
    th = ProjectionSampler(0, 500, 2).directions()
    expected = np.sqrt(np.mean((2 * th[:, 1]) ** 2))
    assert loss_ta(t, s, 2, ProjectionSampler(0, 500, 2), approx=False) == pytest.approx(expected, rel=1e-12)


def test_loss_dm_allows_different_dimensions():
    rng = np.random.default_rng(1)
    t = rng.standard_normal((6, 5))
    s = np.concatenate([t, np.zeros((6, 2))], axis=1)
    assert loss_dm(t, s) == pytest.approx(0.0, abs=1e-24)
    assert loss_ta(t, s) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(InvalidInput):
        loss_pw(t, s)


def test_size_mismatch_rejected():
    with pytest.raises(InvalidInput):
        loss_total(np.zeros((3, 2)), np.zeros((4, 2)))


def test_coefficients_validated():
    with pytest.raises(InvalidInput):
        LossCoefficients(-1.0, 0.0, 0.0)
    with pytest.raises(InvalidInput):
        LossCoefficients(0.0, 0.0, 0.0)
    with pytest.raises(InvalidInput):
        loss_ta(*pair(0), homology="h2")


def test_single_point_topological_loss_is_zero():
    lb = loss_total([[1.0, 2.0]], [[2.0, 2.0]], with_grad=True)
    assert lb.l_ta == 0.0 and lb.l_pw == pytest.approx(0.5) and lb.grad_student.shape == (1, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 40), st.integers(2, 10))
def test_isometry_invariance(seed, n, dim):
    rng = np.random.default_rng(seed)
    t = rng.standard_normal((n, dim))
    s = t @ random_orthogonal(rng, dim).T + 3 * rng.standard_normal(dim)
    assert loss_ta(t, s) < 1e-9 and loss_dm(t, s) < 1e-9
    assert loss_ta(t, s, approx=False) < 1e-9


def test_approx_structure_survivors_die_at_max_distance():
    dm = pairwise_distances([[0.0], [1.0], [10.0], [11.0]])
    h = h0_structure(dm, ThresholdRule.absolute(1.0), approx=True)
    assert sorted(h.deaths.tolist()) == [1.0, 1.0, 11.0]
    assert sorted(h.pairs[np.argmax(h.deaths)].tolist()) == [0, 3]


@pytest.mark.parametrize("approx", [True, False])
@pytest.mark.parametrize("homology", ["h0", "h0+h1"])
def test_gradient_matches_finite_differences(approx, homology):
    t, s = pair(3, n=10)
    coeffs, sampler = LossCoefficients(), ProjectionSampler(7, 50, 2)

    def f(z):
        return loss_total(t, z, coeffs, 2.0, sampler, approx=approx, homology=homology).l_total

    g = loss_total(t, s, coeffs, 2.0, sampler, approx=approx, with_grad=True, homology=homology).grad_student
    fd = central_difference(f, s)
    assert np.max(np.abs(g - fd)) / np.max(np.abs(fd)) < 1e-6


@pytest.mark.parametrize("which", [(1, 0, 0), (0, 1, 0), (0, 0, 1)])
def test_each_term_gradient(which):
    t, s = pair(4, n=9)
    coeffs, sampler = LossCoefficients(*map(float, which)), ProjectionSampler(1, 30, 2)
    g = loss_total(t, s, coeffs, 2.0, sampler, with_grad=True).grad_student
    fd = central_difference(lambda z: loss_total(t, z, coeffs, 2.0, sampler).l_total, s)
    assert np.max(np.abs(g - fd)) / np.max(np.abs(fd)) < 1e-6


def test_breakdown_combination():
    t, s = pair(5)
    c = LossCoefficients(0.5, 2.0, 3.0)
    lb = loss_total(t, s, c)
    assert lb.l_total == pytest.approx(0.5 * lb.l_pw + 2.0 * lb.l_ta + 3.0 * lb.l_dm, rel=1e-14)
    assert set(lb.as_dict()) == {"l_pw", "l_ta", "l_dm", "l_total"}
    assert "grad_student" in loss_total(t, s, c, with_grad=True).as_dict(include_grad=True)
