"""Synthetic point clouds: random benchmark clouds and teacher/student pairs.

Real encoder embeddings are not shipped; the "bilingual" pair is a shared
clustered latent layout seen through two noisy views, optionally with a rigid
motion applied to the second.
"""
from __future__ import annotations

import numpy as np

from .geometry import PointCloud

DISTRIBUTIONS = ("uniform", "gaussian")


def random_cloud(rng: np.random.Generator, distribution: str, n_points: int, dim: int) -> np.ndarray:
    if distribution == "uniform":
        return rng.uniform(0.0, 1.0, size=(n_points, dim))
    if distribution == "gaussian":
        return rng.standard_normal(size=(n_points, dim))
    raise ValueError(f"unknown distribution {distribution!r}")


def random_orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random orthogonal matrix: QR of a Gaussian matrix with R's diagonal made positive."""
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def rigid_motion(rng: np.random.Generator, points: np.ndarray, shift_scale: float = 1.0) -> np.ndarray:
    r = random_orthogonal(rng, points.shape[1])
    t = shift_scale * rng.standard_normal(points.shape[1])
    return points @ r.T + t


def noisy_student(seed: int = 0, n_points: int = 64, dim: int = 8, noise: float = 0.1):
    rng = np.random.default_rng(seed)
    teacher = rng.standard_normal((n_points, dim))
    student = teacher + noise * rng.standard_normal((n_points, dim))
    return PointCloud(teacher), PointCloud(student)


def rigid_student(seed: int = 0, n_points: int = 64, dim: int = 8, shift_scale: float = 1.0):
    rng = np.random.default_rng(seed)
    teacher = rng.standard_normal((n_points, dim))
    return PointCloud(teacher), PointCloud(rigid_motion(rng, teacher, shift_scale))


def bilingual_pair(
    seed: int = 0,
    n_points: int = 64,
    dim: int = 16,
    n_clusters: int = 6,
    cluster_spread: float = 0.3,
    view_noise: float = 0.1,
    rotate: bool = False,
):
    """Two labelled clouds sharing a clustered latent layout (a stand-in for two languages)."""
    rng = np.random.default_rng(seed)
    centers = 2.0 * rng.standard_normal((n_clusters, dim))
    assign = rng.integers(0, n_clusters, size=n_points)
    latent = centers[assign] + cluster_spread * rng.standard_normal((n_points, dim))
    a = latent + view_noise * rng.standard_normal((n_points, dim))
    b = latent + view_noise * rng.standard_normal((n_points, dim))
    if rotate:
        b = rigid_motion(rng, b)
    labels = [f"c{k}" for k in assign]
    return PointCloud(a, labels), PointCloud(b, labels)
