"""Alignment losses between a teacher and a student cloud, with gradients.

All gradients are taken with respect to the student cloud.  The topological
term differentiates through the H0 death times, which are lengths of MST edges
of the student; the MST and the per-direction sort orders are frozen at the
forward pass, so at ties the returned gradient is a subgradient.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidInput
from .filtration import complete_graph, kruskal_mst, threshold_graph
from .geometry import ThresholdRule, as_points, pairwise_distances, resolve_threshold
from .transport import ProjectionSampler, sliced_wasserstein_grad

HOMOLOGY_MODES = ("h0", "h0+h1")


@dataclass(frozen=True)
class LossCoefficients:
    alpha: float = 1.0
    beta: float = 0.01
    gamma: float = 0.01

    def __post_init__(self):
        vals = (self.alpha, self.beta, self.gamma)
        if any(not np.isfinite(c) or c < 0 for c in vals):
            raise InvalidInput(f"coefficients must be finite and >= 0, got {vals}")
        if not any(c > 0 for c in vals):
            raise InvalidInput("at least one coefficient must be positive")


@dataclass
class LossBreakdown:
    l_pw: float
    l_ta: float
    l_dm: float
    l_total: float
    grad_student: Optional[np.ndarray] = field(default=None, repr=False)

    def as_dict(self, include_grad: bool = False) -> dict:
        out = {"l_pw": self.l_pw, "l_ta": self.l_ta, "l_dm": self.l_dm, "l_total": self.l_total}
        if include_grad and self.grad_student is not None:
            out["grad_student"] = self.grad_student.tolist()
        return out


def _pair(teacher, student, same_dim: bool):
    t, s = as_points(teacher), as_points(student)
    if t.shape[0] != s.shape[0]:
        raise InvalidInput(f"teacher has {t.shape[0]} points, student {s.shape[0]}")
    if same_dim and t.shape[1] != s.shape[1]:
        raise InvalidInput(f"teacher dimension {t.shape[1]} != student dimension {s.shape[1]}")
    return t, s


def loss_pw(teacher, student) -> float:
    t, s = _pair(teacher, student, same_dim=True)
    return float(np.mean((s - t) ** 2))


def _grad_pw(t, s):
    return 2.0 * (s - t) / s.size


def loss_dm(teacher, student) -> float:
    t, s = _pair(teacher, student, same_dim=False)
    return float(np.mean((pairwise_distances(s) - pairwise_distances(t)) ** 2))


def _grad_dm(mt, ms, s):
    n = s.shape[0]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(ms > 0, (ms - mt) / ms, 0.0)
    return 4.0 / (n * n) * (r.sum(axis=1)[:, None] * s - r @ s)


@dataclass
class H0Structure:
    """Finite H0 deaths of a cloud and the vertex pair whose distance each one is."""

    deaths: np.ndarray
    pairs: np.ndarray  # (M, 2) vertex indices
    births_h1: np.ndarray
    pairs_h1: np.ndarray


def h0_structure(dm: np.ndarray, threshold_rule: ThresholdRule, approx: bool, want_h1: bool = False) -> H0Structure:
    """Finite H0 deaths (essential class stripped) of raw distances.

    With ``approx`` only edges up to the rule's threshold enter the filtration;
    components alive there die at the largest pairwise distance, the raw-scale
    counterpart of clamping pruned normalized edges to 1.
    """
    n = dm.shape[0]
    if approx:
        eps = resolve_threshold(dm, threshold_rule).epsilon
        g = threshold_graph(dm, eps)
    else:
        g = complete_graph(dm)
    kr = kruskal_mst(g)
    deaths = g.w[kr.mst_index]
    pairs = np.stack([g.u[kr.mst_index], g.v[kr.mst_index]], axis=1)
    survivors = kr.components - 1
    if survivors:
        flat = int(np.argmax(dm))
        far = np.array(divmod(flat, n))
        deaths = np.concatenate([deaths, np.full(survivors, dm[far[0], far[1]])])
        pairs = np.concatenate([pairs, np.tile(far, (survivors, 1))])
    if want_h1:
        births = g.w[kr.cycle_index]
        pairs_h1 = np.stack([g.u[kr.cycle_index], g.v[kr.cycle_index]], axis=1)
    else:
        births, pairs_h1 = np.zeros(0), np.zeros((0, 2), dtype=np.int64)
    return H0Structure(deaths, pairs.astype(np.int64), births, pairs_h1.astype(np.int64))


def _scatter_edge_grad(s, pairs, dlen, lengths):
    """Chain rule from edge lengths ||s_a - s_b|| back to the coordinates."""
    grad = np.zeros_like(s)
    if pairs.shape[0] == 0:
        return grad
    a, b = pairs[:, 0], pairs[:, 1]
    vec = s[a] - s[b]
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(lengths > 0, dlen / lengths, 0.0)
    contrib = vec * scale[:, None]
    np.add.at(grad, a, contrib)
    np.add.at(grad, b, -contrib)
    return grad


def _births_term(bt: np.ndarray, bs: np.ndarray, p: float):
    """1-D p-Wasserstein between birth multisets zero-padded to equal size, with d/d bs."""
    m = max(bt.size, bs.size)
    if m == 0:
        return 0.0, np.zeros(0)
    a = np.sort(np.concatenate([bt, np.zeros(m - bt.size)]))
    pad = np.concatenate([bs, np.zeros(m - bs.size)])
    order = np.argsort(pad, kind="stable")
    diff = pad[order] - a
    absd = np.abs(diff)
    value = float(np.mean(absd**p) ** (1.0 / p))
    g = np.zeros(m)
    if value > 0:
        g[order] = value ** (1.0 - p) / m * absd ** (p - 1.0) * np.sign(diff)
    return value, g[: bs.size]


def _ta_forward(t, s, mt, ms, p, sampler, threshold_rule, approx, homology, with_grad):
    if homology not in HOMOLOGY_MODES:
        raise InvalidInput(f"unknown homology mode {homology!r}")
    n = s.shape[0]
    if n < 2:
        return 0.0, (np.zeros_like(s) if with_grad else None)
    if sampler is None:
        sampler = ProjectionSampler()
    if sampler.dimension != 2:
        raise InvalidInput("diagram projections need a 2-dimensional sampler")
    want_h1 = homology == "h0+h1"
    ht = h0_structure(mt, threshold_rule, approx, want_h1)
    hs = h0_structure(ms, threshold_rule, approx, want_h1)
    dt = np.stack([np.zeros_like(ht.deaths), ht.deaths], axis=1)
    ds = np.stack([np.zeros_like(hs.deaths), hs.deaths], axis=1)
    value, gpts = sliced_wasserstein_grad(dt, ds, p, sampler.directions(), with_grad=with_grad)
    grad = None
    if with_grad:
        # births are constant zero, only the death coordinate moves
        grad = _scatter_edge_grad(s, hs.pairs, gpts[:, 1], hs.deaths)
    if want_h1:
        v1, gb = _births_term(ht.births_h1, hs.births_h1, p)
        value = 0.5 * value + 0.5 * v1
        if with_grad:
            grad = 0.5 * grad + 0.5 * _scatter_edge_grad(s, hs.pairs_h1, gb, hs.births_h1)
    return float(value), grad


def loss_ta(
    teacher,
    student,
    p: float = 2.0,
    sampler: Optional[ProjectionSampler] = None,
    threshold_rule: ThresholdRule = ThresholdRule(),
    approx: bool = True,
    homology: str = "h0",
) -> float:
    """Sliced Wasserstein distance between the H0 diagrams of the two clouds.

    ``homology="h0+h1"`` averages it with a 1-D Wasserstein term on the H1 birth
    multisets (zero-padded to equal size).
    """
    t, s = _pair(teacher, student, same_dim=False)
    mt, ms = pairwise_distances(t), pairwise_distances(s)
    return _ta_forward(t, s, mt, ms, p, sampler, threshold_rule, approx, homology, False)[0]


def loss_total(
    teacher,
    student,
    coeffs: LossCoefficients = LossCoefficients(),
    p: float = 2.0,
    sampler: Optional[ProjectionSampler] = None,
    threshold_rule: ThresholdRule = ThresholdRule(),
    approx: bool = True,
    with_grad: bool = False,
    homology: str = "h0",
) -> LossBreakdown:
    t, s = _pair(teacher, student, same_dim=True)
    mt, ms = pairwise_distances(t), pairwise_distances(s)
    l_pw = float(np.mean((s - t) ** 2))
    l_dm = float(np.mean((ms - mt) ** 2))
    l_ta, g_ta = _ta_forward(t, s, mt, ms, p, sampler, threshold_rule, approx, homology, with_grad)
    total = coeffs.alpha * l_pw + coeffs.beta * l_ta + coeffs.gamma * l_dm
    grad = None
    if with_grad:
        grad = coeffs.alpha * _grad_pw(t, s) + coeffs.beta * g_ta + coeffs.gamma * _grad_dm(mt, ms, s)
    return LossBreakdown(l_pw, l_ta, l_dm, float(total), grad)
