"""Wasserstein-type distances between point sets and persistence diagrams."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .assignment import has_perfect_matching, linear_assignment
from .errors import BudgetExceeded, InvalidInput
from .filtration import PersistenceDiagram
from .geometry import as_points
from .rng import unit_directions

DEFAULT_BUDGET = 512
BLOCK_ELEMENTS = 4096


@dataclass(frozen=True)
class ProjectionSampler:
    seed: int = 0
    count: int = 50
    dimension: int = 2

    def __post_init__(self):
        if self.count < 1:
            raise InvalidInput("need at least one projection direction")
        if self.dimension < 1:
            raise InvalidInput("dimension must be positive")

    def directions(self) -> np.ndarray:
        return unit_directions(self.seed, self.count, self.dimension)


def _check_p(p):
    if not p >= 1:
        raise InvalidInput(f"p must be >= 1, got {p}")


def wasserstein_1d(a, b, p: float = 2.0) -> float:
    """p-Wasserstein between two equal-size uniform samples on the line."""
    _check_p(p)
    a = np.sort(np.asarray(a, dtype=np.float64).ravel())
    b = np.sort(np.asarray(b, dtype=np.float64).ravel())
    if a.shape != b.shape:
        raise InvalidInput(f"samples differ in size: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    return float(np.mean(np.abs(a - b) ** p) ** (1.0 / p))


def sliced_wasserstein_directions(x, y, p: float, theta) -> float:
    """Sliced p-Wasserstein of equal-size point sets over the given unit directions."""
    return sliced_wasserstein_grad(x, y, p, theta, with_grad=False)[0]


def sliced_wasserstein_grad(x, y, p: float, theta, with_grad: bool = True):
    """Value and gradient w.r.t. ``y`` of the sliced distance for fixed directions.

    Sort permutations are frozen, so at ties the result is a subgradient.  At a
    zero value the gradient is taken as zero.
    """
    _check_p(p)
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    theta = np.atleast_2d(np.asarray(theta, dtype=np.float64))
    if x.shape != y.shape:
        raise InvalidInput(f"point sets differ in shape: {x.shape} vs {y.shape}")
    if x.ndim != 2 or x.shape[1] != theta.shape[1]:
        raise InvalidInput("directions and points differ in dimension")
    n = x.shape[0]
    if n == 0:
        return 0.0, (np.zeros_like(y) if with_grad else None)
    k = theta.shape[0]
    # directions go in blocks whose temporaries stay small (cache, no mmap churn);
    # per-direction costs are reduced afterwards in index order
    block = max(1, BLOCK_ELEMENTS // n)
    per_dir = np.empty(k)
    parts = []
    for lo in range(0, k, block):
        th = theta[lo : lo + block]
        py = th @ y.T
        iy = np.argsort(py, axis=1, kind="stable")
        diff = np.take_along_axis(py, iy, axis=1) - np.sort(th @ x.T, axis=1)
        absd = np.abs(diff)
        per_dir[lo : lo + block] = np.mean(absd**p, axis=1)
        if with_grad:
            parts.append((lo, th, iy, diff, absd))
    value = float(np.mean(per_dir) ** (1.0 / p))
    if not with_grad:
        return value, None
    grad = np.zeros_like(y)
    if value == 0.0:
        return value, grad
    scale = value ** (1.0 - p) / (k * n)
    for lo, th, iy, diff, absd in parts:
        # d value / d sorted projection = value^(1-p) / (K n) * |diff|^(p-1) sign(diff)
        coef = scale * absd ** (p - 1.0) * np.sign(diff)
        dpy = np.empty_like(coef)
        np.put_along_axis(dpy, iy, coef, axis=1)
        grad += dpy.T @ th
    return value, grad


def sliced_wasserstein_points(x, y, p: float = 2.0, sampler: ProjectionSampler | None = None) -> float:
    x = as_points(x)
    y = as_points(y)
    if x.shape[0] != y.shape[0]:
        raise InvalidInput(f"point sets differ in cardinality: {x.shape[0]} vs {y.shape[0]}")
    if x.shape[1] != y.shape[1]:
        raise InvalidInput("point sets differ in dimension")
    if sampler is None:
        sampler = ProjectionSampler(dimension=x.shape[1])
    if sampler.dimension != x.shape[1]:
        raise InvalidInput(f"sampler dimension {sampler.dimension} != point dimension {x.shape[1]}")
    return sliced_wasserstein_directions(x, y, p, sampler.directions())


def diagram_points(d) -> np.ndarray:
    """Finite (birth, death) array of a diagram; essential points are rejected."""
    pts = d.points if isinstance(d, PersistenceDiagram) else np.asarray(d, dtype=np.float64).reshape(-1, 2)
    if not np.all(np.isfinite(pts)):
        raise InvalidInput("diagram contains essential (infinite) points; strip them first")
    if np.any(pts[:, 1] < pts[:, 0]):
        raise InvalidInput("diagram points need birth <= death")
    return pts


def diagonal_projection(pts: np.ndarray) -> np.ndarray:
    mid = 0.5 * (pts[:, 0] + pts[:, 1])
    return np.stack([mid, mid], axis=1)


def augment_with_diagonal(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Give each diagram the diagonal projections of the other's points."""
    return (
        np.concatenate([a, diagonal_projection(b)]),
        np.concatenate([b, diagonal_projection(a)]),
    )


def sliced_wasserstein_diagrams(d1, d2, p: float = 2.0, sampler: ProjectionSampler | None = None) -> float:
    a, b = diagram_points(d1), diagram_points(d2)
    if sampler is None:
        sampler = ProjectionSampler(dimension=2)
    if a.shape[0] != b.shape[0]:
        a, b = augment_with_diagonal(a, b)
    return sliced_wasserstein_points(a, b, p, sampler) if a.shape[0] else 0.0


def _diag_cost(pts: np.ndarray, p: float) -> np.ndarray:
    """L_p distance to the nearest diagonal point, to the p-th power."""
    half = 0.5 * np.abs(pts[:, 1] - pts[:, 0])
    if np.isinf(p):
        return half
    return 2.0 * half**p


def _augmented_cost(a: np.ndarray, b: np.ndarray, p: float) -> np.ndarray:
    """Rows: a then diagonal slots for b; columns: b then diagonal slots for a."""
    m, n = a.shape[0], b.shape[0]
    size = m + n
    c = np.zeros((size, size))
    delta = np.abs(a[:, None, :] - b[None, :, :])
    if np.isinf(p):
        c[:m, :n] = delta.max(axis=2)
    else:
        c[:m, :n] = np.sum(delta**p, axis=2)
    c[:m, n:] = _diag_cost(a, p)[:, None]
    c[m:, :n] = _diag_cost(b, p)[None, :]
    return c


def _check_budget(size, budget):
    if size > budget:
        raise BudgetExceeded(f"problem of {size} points exceeds solver budget {budget}")


def wasserstein_exact_diagrams(d1, d2, p: float = 2.0, budget: int = DEFAULT_BUDGET) -> float:
    """Exact p-Wasserstein between finite diagrams, points may go to the diagonal."""
    _check_p(p)
    a, b = diagram_points(d1), diagram_points(d2)
    _check_budget(a.shape[0] + b.shape[0], budget)
    if a.shape[0] + b.shape[0] == 0:
        return 0.0
    _, total = linear_assignment(_augmented_cost(a, b, p))
    return float(max(total, 0.0) ** (1.0 / p))


def bottleneck_diagrams(d1, d2, budget: int = DEFAULT_BUDGET) -> float:
    """Bottleneck (L_inf) distance by binary search over candidate radii."""
    a, b = diagram_points(d1), diagram_points(d2)
    _check_budget(a.shape[0] + b.shape[0], budget)
    m, n = a.shape[0], b.shape[0]
    if m + n == 0:
        return 0.0
    c = _augmented_cost(a, b, np.inf)
    # diagonal slot k of one side may only take its own point; diagonal-diagonal is free
    mask = np.ones_like(c, dtype=bool)
    mask[:m, n:] = np.eye(m, dtype=bool)
    mask[m:, :n] = np.eye(n, dtype=bool)
    c = np.where(mask, c, np.inf)
    radii = np.unique(c[np.isfinite(c)])
    lo, hi = 0, radii.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if has_perfect_matching(c <= radii[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(radii[lo])


def wasserstein_point_clouds(x, y, p: float = 2.0, budget: int = DEFAULT_BUDGET) -> float:
    """Exact p-Wasserstein between uniform empirical measures of equal size."""
    _check_p(p)
    x = as_points(x)
    y = as_points(y)
    if x.shape != y.shape:
        raise InvalidInput(f"point clouds differ in shape: {x.shape} vs {y.shape}")
    _check_budget(x.shape[0], budget)
    cost = cdist(x, y) ** p
    _, total = linear_assignment(cost)
    return float(max(total / x.shape[0], 0.0) ** (1.0 / p))
