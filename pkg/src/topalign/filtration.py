"""0-dimensional Rips persistence of weighted graphs through Kruskal's algorithm.

H0 deaths are the MST edge weights; every edge that closes a cycle is recorded
as an H1 birth candidate.  Sparsified graphs keep only edges of weight at most
``epsilon``; components still alive at ``epsilon`` can be given a finite death
(1 for normalized weights), which realizes the clamped graph where every
pruned edge arrives at weight 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import BudgetExceeded, InvalidInput
from .geometry import check_distance_matrix, normalize_weights


class UnionFind:
    """Disjoint sets over ``0..n-1`` with union by size and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.components = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.components -= 1
        return True


@dataclass
class WeightedGraph:
    num_vertices: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=np.int64).reshape(-1)
        self.v = np.asarray(self.v, dtype=np.int64).reshape(-1)
        self.w = np.asarray(self.w, dtype=np.float64).reshape(-1)
        if not (self.u.shape == self.v.shape == self.w.shape):
            raise InvalidInput("edge arrays must have equal length")
        if self.num_vertices < 1:
            raise InvalidInput("graph needs at least one vertex")
        if self.u.size:
            if np.any(self.u >= self.v) or self.u.min() < 0 or self.v.max() >= self.num_vertices:
                raise InvalidInput("edges must satisfy 0 <= u < v < num_vertices")
            if not np.all(np.isfinite(self.w)) or np.any(self.w < 0):
                raise InvalidInput("edge weights must be finite and non-negative")
            key = self.u * self.num_vertices + self.v
            if np.unique(key).size != key.size:
                raise InvalidInput("duplicate edges")

    @classmethod
    def from_edges(cls, num_vertices, edges) -> "WeightedGraph":
        """Build from ``(u, v, w)`` triples in any orientation, sorted canonically."""
        edges = list(edges)
        if not edges:
            return cls(num_vertices, [], [], [])
        arr = np.array([(min(a, b), max(a, b), c) for a, b, c in edges], dtype=np.float64)
        u, v, w = arr[:, 0].astype(np.int64), arr[:, 1].astype(np.int64), arr[:, 2]
        order = np.lexsort((v, u))
        return cls(num_vertices, u[order], v[order], w[order])

    @property
    def num_edges(self) -> int:
        return int(self.w.size)

    def edges(self):
        return list(zip(self.u.tolist(), self.v.tolist(), self.w.tolist()))


def complete_graph(dm, normalized: bool = False) -> WeightedGraph:
    dm = np.asarray(dm, dtype=np.float64)
    if normalized:
        dm = normalize_weights(dm)
    n = dm.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    return WeightedGraph(n, iu, ju, dm[iu, ju])


def threshold_graph(dm, epsilon: float) -> WeightedGraph:
    """Graph of the edges with weight <= epsilon, built without the complete edge list."""
    dm = np.asarray(dm, dtype=np.float64)
    n = dm.shape[0]
    keep = np.triu(dm <= epsilon, k=1)
    iu, ju = np.nonzero(keep)
    return WeightedGraph(n, iu, ju, dm[iu, ju])


def sparsify(g: WeightedGraph, epsilon: float, mode: str = "drop") -> WeightedGraph:
    """Prune (``"drop"``) or clamp to weight 1 (``"clamp"``) every edge heavier than epsilon."""
    if not epsilon >= 0:
        raise InvalidInput(f"epsilon must be non-negative, got {epsilon}")
    over = g.w > epsilon
    if mode == "drop":
        keep = ~over
        return WeightedGraph(g.num_vertices, g.u[keep], g.v[keep], g.w[keep])
    if mode == "clamp":
        if np.any(g.w > 1.0):
            raise InvalidInput("clamp mode needs normalized weights (all <= 1)")
        return WeightedGraph(g.num_vertices, g.u.copy(), g.v.copy(), np.where(over, 1.0, g.w))
    raise InvalidInput(f"unknown sparsify mode {mode!r}")


class KruskalResult(NamedTuple):
    mst_edges: list  # (u, v, w)
    merge_events: list  # (w, root_a, root_b)
    h1_birth_candidates: list
    order: np.ndarray  # edge indices in processing order
    mst_index: np.ndarray  # indices into the graph's edge arrays
    cycle_index: np.ndarray  # indices of the cycle-closing edges, ascending weight
    components: int


def kruskal_mst(g: WeightedGraph) -> KruskalResult:
    """Process edges by ascending (w, u, v); ties break lexicographically."""
    order = np.lexsort((g.v, g.u, g.w))
    uf = UnionFind(g.num_vertices)
    us, vs, ws = g.u[order].tolist(), g.v[order].tolist(), g.w[order].tolist()
    mst, merges, cycles, mst_idx, cyc_idx = [], [], [], [], []
    find = uf.find
    for k, (a, b, w) in enumerate(zip(us, vs, ws)):
        ra, rb = find(a), find(b)
        if ra == rb:
            cycles.append(w)
            cyc_idx.append(k)
            continue
        uf.union(ra, rb)
        mst.append((a, b, w))
        merges.append((w, ra, rb))
        mst_idx.append(k)
    return KruskalResult(
        mst,
        merges,
        cycles,
        order,
        order[np.asarray(mst_idx, dtype=np.int64)],
        order[np.asarray(cyc_idx, dtype=np.int64)],
        uf.components,
    )


@dataclass
class PersistenceDiagram:
    """Birth/death pairs of one homology dimension; deaths may be ``inf``."""

    dimension: int
    points: np.ndarray
    includes_essential: bool = False

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.size == 0:
            pts = pts.reshape(0, 2)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise InvalidInput(f"diagram points must have shape (M, 2), got {pts.shape}")
        if np.any(np.isnan(pts)) or np.any(pts[:, 1] < pts[:, 0]):
            raise InvalidInput("diagram points need birth <= death")
        self.points = pts

    def __len__(self):
        return self.points.shape[0]

    @property
    def essential_mask(self) -> np.ndarray:
        return np.isinf(self.points[:, 1])

    @property
    def num_essential(self) -> int:
        return int(self.essential_mask.sum())

    def finite(self) -> np.ndarray:
        return self.points[~self.essential_mask]

    def finite_diagram(self) -> "PersistenceDiagram":
        return PersistenceDiagram(self.dimension, self.finite(), includes_essential=False)

    def deaths(self) -> np.ndarray:
        return self.finite()[:, 1]

    def sorted_points(self) -> np.ndarray:
        pts = self.points
        return pts[np.lexsort((pts[:, 1], pts[:, 0]))]

    def same_multiset(self, other: "PersistenceDiagram") -> bool:
        """Exact (bitwise) equality as multisets."""
        return (
            self.dimension == other.dimension
            and len(self) == len(other)
            and np.array_equal(self.sorted_points(), other.sorted_points())
        )


def h0_from_kruskal(num_vertices, kr: KruskalResult, finite_death_for_unmerged=None) -> PersistenceDiagram:
    deaths = [w for w, _, _ in kr.merge_events]
    survivors = kr.components - 1
    if finite_death_for_unmerged is not None:
        deaths.extend([float(finite_death_for_unmerged)] * survivors)
        n_inf = 1
    else:
        n_inf = kr.components
    deaths.extend([math.inf] * n_inf)
    pts = np.zeros((len(deaths), 2))
    pts[:, 1] = deaths
    return PersistenceDiagram(0, pts, includes_essential=True)


def h0_diagram(g: WeightedGraph, finite_death_for_unmerged: Optional[float] = None) -> PersistenceDiagram:
    """H0 diagram: one ``(0, w)`` per merge; survivors die at the given value, or never.

    Exactly one essential ``(0, inf)`` point remains when a finite death is given.
    """
    return h0_from_kruskal(g.num_vertices, kruskal_mst(g), finite_death_for_unmerged)


def h1_births(g: WeightedGraph) -> np.ndarray:
    # every cycle-closing edge counts, including classes filled at the same scale
    return np.sort(np.asarray(kruskal_mst(g).h1_birth_candidates, dtype=np.float64))


def count_components_at(g: WeightedGraph, epsilon: float) -> int:
    uf = UnionFind(g.num_vertices)
    keep = g.w <= epsilon
    for a, b in zip(g.u[keep].tolist(), g.v[keep].tolist()):
        uf.union(a, b)
    return uf.components


def sparsified_h0(dm, epsilon: float, unmerged_death: Optional[float] = None) -> PersistenceDiagram:
    """H0 of the epsilon-graph; survivors die at ``unmerged_death`` (default: max weight)."""
    dm = np.asarray(dm, dtype=np.float64)
    if unmerged_death is None:
        unmerged_death = float(dm.max())
    return h0_diagram(threshold_graph(dm, epsilon), finite_death_for_unmerged=unmerged_death)


@dataclass
class BoundCertificate:
    epsilon: float
    p: float
    n_points: int
    m_eps: int
    c_eps: int
    exact_wp: float
    is_upper_bound: bool
    bound: float
    satisfied: bool

    def as_dict(self):
        return dict(self.__dict__)


def explicit_matching_cost(deaths_exact: np.ndarray, epsilon: float, p: float) -> float:
    """Cost of sending every death in (epsilon, 1] to 1 and keeping the rest in place."""
    moved = deaths_exact[deaths_exact > epsilon]
    return float(np.sum(np.abs(1.0 - moved) ** p)) ** (1.0 / p)


def verify_bound(dm, epsilon: float, p: float = 2.0, exact_solver_budget: int = 512) -> BoundCertificate:
    """Check the W_p error bound between H0 of the normalized complete graph and its clamped graph."""
    from .transport import wasserstein_exact_diagrams

    if not 0.0 <= epsilon <= 1.0:
        raise InvalidInput(f"epsilon must lie in [0, 1], got {epsilon}")
    if p < 1:
        raise InvalidInput(f"p must be >= 1, got {p}")
    dm = check_distance_matrix(dm)
    n = dm.shape[0]
    if n == 1:
        return BoundCertificate(epsilon, p, 1, 0, 1, 0.0, False, 0.0, True)
    g = complete_graph(dm, normalized=True)
    exact = h0_diagram(g)
    approx = h0_diagram(sparsify(g, epsilon, "drop"), finite_death_for_unmerged=1.0)
    deaths = exact.deaths()
    m_eps = int(np.sum(deaths > epsilon))
    c_eps = count_components_at(g, epsilon)
    bound = m_eps ** (1.0 / p) * (1.0 - epsilon)
    d1, d2 = exact.finite_diagram(), approx.finite_diagram()
    # both graphs are connected at scale 1, so the single essential classes match at zero cost
    try:
        if len(d1) + len(d2) > exact_solver_budget:
            raise BudgetExceeded(f"{len(d1) + len(d2)} diagram points")
        wp = wasserstein_exact_diagrams(d1, d2, p, budget=exact_solver_budget)
        upper = False
    except BudgetExceeded:
        wp = explicit_matching_cost(deaths, epsilon, p)
        upper = True
    return BoundCertificate(
        epsilon=float(epsilon),
        p=float(p),
        n_points=n,
        m_eps=m_eps,
        c_eps=c_eps,
        exact_wp=float(wp),
        is_upper_bound=upper,
        bound=float(bound),
        satisfied=bool(wp <= bound + 1e-9),
    )
