"""Benchmark campaigns on random point clouds.

Every trial draws from its own generator seeded by ``derive_seed(master_seed, ...)``
so results do not depend on execution order.
"""
from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .filtration import (
    complete_graph,
    count_components_at,
    h0_diagram,
    threshold_graph,
    verify_bound,
)
from .fixtures import DISTRIBUTIONS, random_cloud
from .geometry import ThresholdRule, as_points, distance_stats, normalize_weights, pairwise_distances
from .losses import h0_structure, loss_ta
from .rng import derive_seed
from .transport import ProjectionSampler, sliced_wasserstein_diagrams

GRID_SIZES = (64, 128, 256, 512)
GRID_LAMBDAS = (1.0, 0.5, 0.0, -0.5, -1.0)

# reference cells: (distribution, N) -> per-lambda values for lambda = 1, 0.5, 0, -0.5, -1
REFERENCE_COMPONENTS = {
    ("uniform", 64): (1.6, 1.1, 1.0, 1.0, 1.0), ("gaussian", 64): (4.1, 1.4, 1.1, 1.0, 1.0),
    ("uniform", 128): (1.7, 1.0, 1.0, 1.0, 1.0), ("gaussian", 128): (3.1, 1.2, 1.0, 1.0, 1.0),
    ("uniform", 256): (1.1, 1.0, 1.0, 1.0, 1.0), ("gaussian", 256): (3.2, 1.2, 1.1, 1.0, 1.0),
    ("uniform", 512): (1.0, 1.0, 1.0, 1.0, 1.0), ("gaussian", 512): (2.2, 1.0, 1.0, 1.0, 1.0),
}
REFERENCE_SPARSITY = {
    ("uniform", 64): (0.158, 0.306, 0.496, 0.690, 0.840), ("gaussian", 64): (0.157, 0.309, 0.504, 0.693, 0.840),
    ("uniform", 128): (0.160, 0.310, 0.499, 0.692, 0.841), ("gaussian", 128): (0.160, 0.311, 0.502, 0.694, 0.841),
    ("uniform", 256): (0.159, 0.308, 0.499, 0.692, 0.841), ("gaussian", 256): (0.159, 0.310, 0.503, 0.693, 0.842),
    ("uniform", 512): (0.158, 0.308, 0.499, 0.690, 0.841), ("gaussian", 512): (0.159, 0.310, 0.502, 0.692, 0.841),
}
REFERENCE_LAMBDAS = GRID_LAMBDAS


@dataclass
class SweepConfig:
    distributions: Sequence[str] = DISTRIBUTIONS
    dimension: int = 512
    sizes: Sequence[int] = GRID_SIZES
    lambdas: Sequence[float] = GRID_LAMBDAS
    trials: int = 10
    master_seed: int = 0

    def __post_init__(self):
        if self.trials < 1 or self.dimension < 1:
            raise ValueError("trials and dimension must be positive")
        for d in self.distributions:
            if d not in DISTRIBUTIONS:
                raise ValueError(f"unknown distribution {d!r}")


@dataclass
class SweepCell:
    distribution: str
    N: int
    lam: float
    mean_components: float
    mean_sparsity: float
    mean_seconds: float


@dataclass
class SweepReport:
    config: dict
    cells: list = field(default_factory=list)

    def cell(self, distribution: str, N: int, lam: float) -> SweepCell:
        for c in self.cells:
            if c.distribution == distribution and c.N == N and c.lam == lam:
                return c
        raise KeyError((distribution, N, lam))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["distribution", "N", "lambda", "mean_components", "mean_sparsity", "mean_seconds"])
        for c in self.cells:
            w.writerow([c.distribution, c.N, repr(float(c.lam)), format(c.mean_components, ".17g"),
                        format(c.mean_sparsity, ".17g"), format(c.mean_seconds, ".17g")])
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {"config": self.config, "cells": [asdict(c) for c in self.cells]}


def sparsified_pipeline(wn: np.ndarray, epsilon: float):
    """The timed unit: epsilon-graph of normalized weights and its H0 diagram."""
    return h0_diagram(threshold_graph(wn, epsilon), finite_death_for_unmerged=1.0)


def run_sweep(config: Optional[SweepConfig] = None) -> SweepReport:
    config = config or SweepConfig()
    report = SweepReport(config=asdict(config))
    for dist in config.distributions:
        di = DISTRIBUTIONS.index(dist)  # global index, so a subset reproduces the full grid's cells
        for N in config.sizes:
            acc = {lam: [0.0, 0.0, 0.0] for lam in config.lambdas}
            n_pairs = N * (N - 1) // 2
            for trial in range(config.trials):
                rng = np.random.default_rng(derive_seed(config.master_seed, di, N, trial))
                wn = normalize_weights(pairwise_distances(random_cloud(rng, dist, N, config.dimension)))
                g = complete_graph(wn)
                mu, sigma = distance_stats(wn)
                for lam in config.lambdas:
                    eps = max(mu - lam * sigma, 0.0)
                    t0 = time.perf_counter()
                    sparsified_pipeline(wn, eps)
                    elapsed = time.perf_counter() - t0
                    a = acc[lam]
                    a[0] += count_components_at(g, eps)
                    a[1] += np.count_nonzero(g.w <= eps) / n_pairs
                    a[2] += elapsed
            for lam in config.lambdas:
                comps, spars, secs = (x / config.trials for x in acc[lam])
                report.cells.append(SweepCell(dist, N, float(lam), comps, spars, secs))
    return report


@dataclass
class CampaignResult:
    certificates: list
    violations: int
    bound_form_mismatches: int
    component_mismatches: int

    def summary(self) -> dict:
        certs = self.certificates
        ratios = [c.exact_wp / c.bound for c in certs if c.bound > 0]
        return {
            "trials": len(certs),
            "violations": self.violations,
            "bound_form_mismatches": self.bound_form_mismatches,
            "component_mismatches": self.component_mismatches,
            "upper_bound_only": sum(c.is_upper_bound for c in certs),
            "max_wp_over_bound": max(ratios) if ratios else 0.0,
        }


def run_bound_campaign(
    trials: int = 1000,
    max_n: int = 64,
    p_values: Sequence[float] = (1.0, 2.0),
    master_seed: int = 0,
    max_dim: int = 16,
    exact_solver_budget: int = 512,
) -> CampaignResult:
    """Random clouds and random epsilon in [0, 1]; each trial certified by verify_bound."""
    certs = []
    violations = form = comp = 0
    for i in range(trials):
        rng = np.random.default_rng(derive_seed(master_seed, i))
        N = int(rng.integers(2, max_n + 1))
        dim = int(rng.integers(1, max_dim + 1))
        dist = DISTRIBUTIONS[i % len(DISTRIBUTIONS)]
        eps = float(rng.uniform(0.0, 1.0))
        p = float(p_values[i % len(p_values)])
        cert = verify_bound(pairwise_distances(random_cloud(rng, dist, N, dim)), eps, p, exact_solver_budget)
        certs.append(cert)
        violations += not cert.satisfied
        # bound written through the component count (c - 1)^(1/p) (1 - eps)
        form += not math.isclose((cert.c_eps - 1) ** (1.0 / p) * (1.0 - eps), cert.bound, rel_tol=0, abs_tol=1e-12)
        comp += not (cert.c_eps == cert.m_eps + 1 and 0 <= cert.m_eps <= N - 1)
    return CampaignResult(certs, violations, form, comp)


def run_timing_sweep(
    N: int = 256,
    n: int = 512,
    lambdas: Sequence[float] = (0.0, 0.5, 1.0, 1.5),
    trials: int = 10,
    master_seed: int = 0,
    distribution: str = "gaussian",
) -> list[tuple[float, float]]:
    """Mean wall-clock of the sparsified H0 pipeline per lambda (lambdas interleaved per trial)."""
    totals = {lam: 0.0 for lam in lambdas}
    for trial in range(trials):
        rng = np.random.default_rng(derive_seed(master_seed, N, n, trial))
        wn = normalize_weights(pairwise_distances(random_cloud(rng, distribution, N, n)))
        mu, sigma = distance_stats(wn)
        for lam in lambdas:
            eps = max(mu - lam * sigma, 0.0)
            t0 = time.perf_counter()
            sparsified_pipeline(wn, eps)
            totals[lam] += time.perf_counter() - t0
    return [(float(lam), totals[lam] / trials) for lam in lambdas]


@dataclass
class KSweepRow:
    K: int
    mean_swd: float
    stderr: float
    seconds_per_eval: float


def run_k_sweep(
    teacher,
    student,
    ks: Sequence[int] = (5, 10, 30, 50, 100),
    seeds_per_k: int = 100,
    master_seed: int = 0,
    p: float = 2.0,
    threshold_rule: ThresholdRule = ThresholdRule(),
    approx: bool = True,
    timing_repeats: int = 5,
) -> list[KSweepRow]:
    """Monte-Carlo spread of the topological loss per K, and the per-evaluation SWD cost.

    Diagrams do not depend on K, so the timing covers direction sampling and
    the sliced distance only: median per-evaluation time over ``timing_repeats``
    passes through all seeds.
    """
    t, s = as_points(teacher), as_points(student)
    mt, ms = pairwise_distances(t), pairwise_distances(s)
    deaths = [h0_structure(m, threshold_rule, approx).deaths for m in (mt, ms)]
    dt, ds = (np.stack([np.zeros_like(d), d], axis=1) for d in deaths)
    samplers = {K: [ProjectionSampler(derive_seed(master_seed, K, i), K, 2) for i in range(seeds_per_k)] for K in ks}
    vals = {K: np.array([loss_ta(t, s, p, sm, threshold_rule, approx) for sm in samplers[K]]) for K in ks}
    # K values interleaved per seed so machine noise hits every K alike
    times = {K: [] for K in ks}
    for _ in range(timing_repeats):
        for i in range(seeds_per_k):
            for K in ks:
                t0 = time.perf_counter()
                sliced_wasserstein_diagrams(dt, ds, p, samplers[K][i])
                times[K].append(time.perf_counter() - t0)
    rows = []
    for K in ks:
        v = vals[K]
        stderr = float(v.std(ddof=1) / math.sqrt(v.size)) if v.size > 1 else 0.0
        rows.append(KSweepRow(int(K), float(v.mean()), stderr, float(np.median(times[K]))))
    return rows
