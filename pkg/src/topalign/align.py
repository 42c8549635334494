"""Gradient-descent alignment of a student cloud to a frozen teacher cloud."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from . import __version__
from .errors import BudgetExceeded, DivergenceError, InvalidInput
from .filtration import complete_graph, h0_diagram, h1_births
from .geometry import ThresholdRule, as_points, curve_divergence, pairwise_distances, sorted_distance_curve
from .losses import LossBreakdown, LossCoefficients, loss_total
from .rng import derive_seed
from .transport import (
    ProjectionSampler,
    sliced_wasserstein_diagrams,
    wasserstein_1d,
    wasserstein_exact_diagrams,
    wasserstein_point_clouds,
)

ABLATION_SETTINGS = {
    "pw": LossCoefficients(1.0, 0.0, 0.0),
    "pw+ta": LossCoefficients(1.0, 0.01, 0.0),
    "pw+dm": LossCoefficients(1.0, 0.0, 0.01),
    "pw+ta+dm": LossCoefficients(1.0, 0.01, 0.01),
}


@dataclass
class StudentMap:
    """Trainable student: free coordinates, or an affine map of a fixed base cloud."""

    kind: str
    base: np.ndarray
    weight: Optional[np.ndarray] = None
    bias: Optional[np.ndarray] = None

    @classmethod
    def free_points(cls, init) -> "StudentMap":
        return cls("free", as_points(init).copy())

    @classmethod
    def affine(cls, init, weight=None, bias=None) -> "StudentMap":
        base = as_points(init).copy()
        n = base.shape[1]
        w = np.eye(n) if weight is None else np.array(weight, dtype=np.float64)
        b = np.zeros(n) if bias is None else np.array(bias, dtype=np.float64)
        if w.shape != (n, n) or b.shape != (n,):
            raise InvalidInput(f"affine map needs a {n}x{n} weight and length-{n} bias")
        return cls("affine", base, w, b)

    def __post_init__(self):
        if self.kind not in ("free", "affine"):
            raise InvalidInput(f"unknown student map {self.kind!r}")

    def copy(self) -> "StudentMap":
        return StudentMap(
            self.kind,
            self.base.copy(),
            None if self.weight is None else self.weight.copy(),
            None if self.bias is None else self.bias.copy(),
        )

    def apply(self) -> np.ndarray:
        if self.kind == "free":
            return self.base
        return self.base @ self.weight.T + self.bias

    def descend(self, grad_student: np.ndarray, lr: float) -> None:
        if self.kind == "free":
            self.base = self.base - lr * grad_student
        else:
            self.weight = self.weight - lr * (grad_student.T @ self.base)
            self.bias = self.bias - lr * grad_student.sum(axis=0)


@dataclass
class OptimizerConfig:
    steps: int = 500
    learning_rate: float = 0.05
    coeffs: LossCoefficients = field(default_factory=LossCoefficients)
    p: float = 2.0
    K: int = 50
    seed: int = 0
    threshold_rule: ThresholdRule = field(default_factory=ThresholdRule)
    approx: bool = True
    log_every: int = 10
    homology: str = "h0"

    def __post_init__(self):
        if self.steps < 1:
            raise InvalidInput("steps must be >= 1")
        if not self.learning_rate > 0:
            raise InvalidInput("learning rate must be positive")
        if self.log_every < 1:
            raise InvalidInput("log_every must be >= 1")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["threshold_rule"] = asdict(self.threshold_rule)
        d["coeffs"] = asdict(self.coeffs)
        return d


def alignment_metrics(teacher, student, K: int = 50, seed: int = 0, p: float = 2.0) -> dict:
    """Distance summary between two clouds: sorted-curve gaps, W2 of clouds and diagrams."""
    t, s = as_points(teacher), as_points(student)
    mt, ms = pairwise_distances(t), pairwise_distances(s)
    dt = h0_diagram(complete_graph(mt)).finite_diagram()
    ds = h0_diagram(complete_graph(ms)).finite_diagram()
    try:
        w2c = wasserstein_point_clouds(t, s, p) if t.shape == s.shape else None
    except BudgetExceeded:
        w2c = None
    try:
        w2d = wasserstein_exact_diagrams(dt, ds, p)
    except BudgetExceeded:
        w2d = None
    bt, bs = h1_births(complete_graph(mt)), h1_births(complete_graph(ms))
    size = max(bt.size, bs.size)
    bt = np.concatenate([bt, np.zeros(size - bt.size)])
    bs = np.concatenate([bs, np.zeros(size - bs.size)])
    if t.shape[0] >= 2:
        dm_mean, dm_rmse = curve_divergence(sorted_distance_curve(mt), sorted_distance_curve(ms))
    else:
        dm_mean = dm_rmse = 0.0
    return {
        "w2_clouds": w2c,
        "w2_h0_diagrams": w2d,
        "sw2_h0_diagrams": sliced_wasserstein_diagrams(dt, ds, p, ProjectionSampler(seed, K, 2)),
        "h1_birth_w1": wasserstein_1d(bt, bs, 1.0) if size else 0.0,
        "dm_mean": dm_mean,
        "dm_rmse": dm_rmse,
    }


@dataclass
class AlignmentReport:
    config: dict
    steps: list
    initial_metrics: dict
    final_metrics: dict

    def as_dict(self) -> dict:
        return {
            "version": __version__,
            "config": self.config,
            "steps": self.steps,
            "initial_metrics": self.initial_metrics,
            "final_metrics": self.final_metrics,
        }


def _finite(lb: LossBreakdown) -> bool:
    vals = [lb.l_pw, lb.l_ta, lb.l_dm, lb.l_total]
    if not all(np.isfinite(vals)):
        return False
    return lb.grad_student is None or bool(np.all(np.isfinite(lb.grad_student)))


def optimize(teacher, student_init, student_map: Optional[StudentMap] = None, config: Optional[OptimizerConfig] = None):
    """Plain gradient descent on the map parameters; returns (final map, report).

    Step ``t`` draws its projection directions from ``derive_seed(config.seed, t)``.
    """
    config = config or OptimizerConfig()
    t = as_points(teacher)
    params = (student_map or StudentMap.free_points(student_init)).copy()
    s0 = params.apply()
    if s0.shape != t.shape:
        raise InvalidInput(f"student shape {s0.shape} != teacher shape {t.shape}")
    logged = []
    for step in range(config.steps + 1):
        s = params.apply()
        sampler = ProjectionSampler(derive_seed(config.seed, step), config.K, 2)
        # overflow surfaces as a DivergenceError below, not as numpy warnings
        with np.errstate(over="ignore", invalid="ignore"):
            lb = loss_total(
                t,
                s,
                config.coeffs,
                config.p,
                sampler,
                config.threshold_rule,
                config.approx,
                with_grad=step < config.steps,
                homology=config.homology,
            )
        if not _finite(lb):
            raise DivergenceError(step)
        if step % config.log_every == 0:
            logged.append({"step": step, **lb.as_dict()})
        if step < config.steps:
            params.descend(lb.grad_student, config.learning_rate)
    report = AlignmentReport(
        config={"student_map": params.kind, **config.as_dict()},
        steps=logged,
        initial_metrics=alignment_metrics(t, s0, config.K, config.seed, config.p),
        final_metrics=alignment_metrics(t, params.apply(), config.K, config.seed, config.p),
    )
    return params, report


def ablation_suite(teacher, student_init, base_config: Optional[OptimizerConfig] = None, student_map=None) -> dict:
    """Run the four coefficient settings with one shared seed; keyed by setting name."""
    base_config = base_config or OptimizerConfig()
    out = {}
    for name, coeffs in ABLATION_SETTINGS.items():
        _, report = optimize(teacher, student_init, student_map, replace(base_config, coeffs=coeffs))
        out[name] = report
    return out


def ablation_table(reports: dict) -> list[dict]:
    rows = []
    for name, rep in reports.items():
        row = {"setting": name, **rep.config["coeffs"]}
        for key, val in rep.final_metrics.items():
            row[f"initial_{key}"] = rep.initial_metrics[key]
            row[f"final_{key}"] = val
        row["final_l_total"] = rep.steps[-1]["l_total"]
        rows.append(row)
    return rows
