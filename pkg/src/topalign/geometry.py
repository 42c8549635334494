"""Point clouds and the distance statistics derived from them.

Distance matrices are plain ``(N, N)`` float64 arrays; :func:`check_distance_matrix`
validates the invariants when a matrix arrives from outside the package.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import DegenerateInput, InvalidInput


@dataclass
class PointCloud:
    points: np.ndarray
    labels: Optional[Sequence[str]] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidInput(f"point cloud must be a non-empty (N, n) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InvalidInput("point cloud contains non-finite coordinates")
        if self.labels is not None:
            self.labels = list(self.labels)
            if len(self.labels) != pts.shape[0]:
                raise InvalidInput(f"{len(self.labels)} labels for {pts.shape[0]} points")
        self.points = pts

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.size


def as_points(cloud) -> np.ndarray:
    """Return the ``(N, n)`` coordinate array of a PointCloud or array-like."""
    if isinstance(cloud, PointCloud):
        return cloud.points
    return PointCloud(cloud).points


def check_distance_matrix(dm, atol: float = 0.0) -> np.ndarray:
    dm = np.asarray(dm, dtype=np.float64)
    if dm.ndim != 2 or dm.shape[0] != dm.shape[1] or dm.shape[0] < 1:
        raise InvalidInput(f"distance matrix must be square and non-empty, got shape {dm.shape}")
    if not np.all(np.isfinite(dm)):
        raise InvalidInput("distance matrix contains non-finite entries")
    if np.any(dm < 0):
        raise InvalidInput("distance matrix contains negative entries")
    if np.any(np.abs(np.diag(dm)) > atol):
        raise InvalidInput("distance matrix has a non-zero diagonal")
    if np.any(np.abs(dm - dm.T) > atol):
        raise InvalidInput("distance matrix is not symmetric")
    return dm


def pairwise_distances(cloud) -> np.ndarray:
    pts = as_points(cloud)
    if pts.shape[0] == 1:
        return np.zeros((1, 1))
    # squareform mirrors one condensed value into (i, j) and (j, i): exact symmetry
    return squareform(pdist(pts, metric="euclidean"))


def upper_triangle(dm: np.ndarray) -> np.ndarray:
    """Off-diagonal upper-triangle entries in row-major (i < j) order."""
    iu = np.triu_indices(dm.shape[0], k=1)
    return dm[iu]


def normalize_weights(dm) -> np.ndarray:
    dm = np.asarray(dm, dtype=np.float64)
    big = float(upper_triangle(dm).max()) if dm.shape[0] > 1 else 0.0
    if not big > 0:
        raise DegenerateInput("cannot normalize: all points coincide")
    return dm / big


@dataclass(frozen=True)
class ThresholdRule:
    """How to pick the sparsification scale for a distance matrix.

    ``kind="mean_minus_std"`` gives ``mean - lam * std`` of the off-diagonal
    distances; ``kind="absolute"`` uses ``value`` as is.
    """

    lam: float = 0.5
    kind: str = "mean_minus_std"
    value: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("mean_minus_std", "absolute"):
            raise InvalidInput(f"unknown threshold kind {self.kind!r}")
        if self.kind == "absolute" and (self.value is None or not np.isfinite(self.value)):
            raise InvalidInput("absolute threshold needs a finite value")

    @classmethod
    def mean_minus_std(cls, lam: float) -> "ThresholdRule":
        return cls(lam=float(lam))

    @classmethod
    def absolute(cls, value: float) -> "ThresholdRule":
        return cls(lam=0.0, kind="absolute", value=float(value))


@dataclass(frozen=True)
class ThresholdResult:
    epsilon: float
    raw: float
    clamped: bool = field(default=False)


def distance_stats(dm) -> tuple[float, float]:
    """Mean and population std of the off-diagonal distances."""
    vals = upper_triangle(np.asarray(dm, dtype=np.float64))
    return float(vals.mean()), float(vals.std())


def resolve_threshold(dm, rule: ThresholdRule) -> ThresholdResult:
    dm = np.asarray(dm, dtype=np.float64)
    if dm.shape[0] < 2:
        raise DegenerateInput("threshold needs at least two points")
    if rule.kind == "absolute":
        raw = float(rule.value)
    else:
        mu, sigma = distance_stats(dm)
        raw = mu - rule.lam * sigma
    if raw < 0:
        return ThresholdResult(epsilon=0.0, raw=raw, clamped=True)
    return ThresholdResult(epsilon=raw, raw=raw)


def threshold(dm, rule: ThresholdRule) -> float:
    res = resolve_threshold(dm, rule)
    if res.clamped:
        warnings.warn(f"negative threshold {res.raw:.6g} clamped to 0", RuntimeWarning, stacklevel=2)
    return res.epsilon


def sorted_distance_curve(dm) -> np.ndarray:
    dm = np.asarray(dm, dtype=np.float64)
    if dm.shape[0] < 2:
        raise DegenerateInput("distance curve needs at least two points")
    return np.sort(upper_triangle(dm))


def curve_divergence(a, b) -> tuple[float, float]:
    """Mean absolute and root-mean-square elementwise gap between two curves."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidInput(f"curves must be 1-D of equal length, got {a.shape} and {b.shape}")
    if a.size == 0:
        return 0.0, 0.0
    gap = np.abs(a - b)
    return float(gap.mean()), float(np.sqrt(np.mean(gap * gap)))
