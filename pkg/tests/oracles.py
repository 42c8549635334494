"""Slow, obviously-correct reference implementations used as test oracles."""
from __future__ import annotations

import itertools
import math

import numpy as np


def prim_mst_weights(dm):
    """Sorted MST edge weights of the complete graph by O(N^2) Prim."""
    dm = np.asarray(dm, dtype=np.float64)
    n = dm.shape[0]
    if n < 2:
        return np.zeros(0)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = dm[0].copy()
    out = []
    for _ in range(n - 1):
        cand = np.where(in_tree, np.inf, best)
        j = int(np.argmin(cand))
        out.append(cand[j])
        in_tree[j] = True
        best = np.minimum(best, dm[j])
    return np.sort(np.array(out))


def components_by_dfs(dm, eps):
    n = dm.shape[0]
    seen = np.zeros(n, dtype=bool)
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        stack = [start]
        seen[start] = True
        while stack:
            i = stack.pop()
            for j in np.flatnonzero((dm[i] <= eps) & ~seen):
                if j != i:
                    seen[j] = True
                    stack.append(j)
    return count


def _to_diagonal(pt, p):
    """Cost of sending a point to its orthogonal projection on the diagonal."""
    if math.isinf(p):
        # closed form, one rounding; the midpoint route below would round twice
        return abs(pt[1] - pt[0]) / 2.0
    mid = (pt[0] + pt[1]) / 2.0
    delta = np.abs(np.asarray(pt) - mid)
    return float(delta.max()) if math.isinf(p) else float(np.sum(delta**p))


def _point_cost(a, b, p):
    delta = np.abs(np.asarray(a) - np.asarray(b))
    return float(delta.max()) if math.isinf(p) else float(np.sum(delta**p))


def _partial_injections(m, n):
    """Every partial matching of rows 0..m-1 into columns 0..n-1 as a tuple (col or None per row)."""
    def gen(i, used):
        if i == m:
            yield ()
            return
        for rest in gen(i + 1, used):
            yield (None,) + rest
        for j in range(n):
            if j in used:
                continue
            for rest in gen(i + 1, used | {j}):
                yield (j,) + rest
    return gen(0, frozenset())


def brute_diagram_distance(a, b, p):
    """W_p (finite p) or bottleneck (p = inf) by enumerating every partial matching."""
    a = [tuple(x) for x in np.asarray(a, dtype=np.float64).reshape(-1, 2)]
    b = [tuple(x) for x in np.asarray(b, dtype=np.float64).reshape(-1, 2)]
    agg = max if math.isinf(p) else sum
    pair = [[_point_cost(x, y, p) for y in b] for x in a]
    da = [_to_diagonal(x, p) for x in a]
    db = [_to_diagonal(y, p) for y in b]
    best = math.inf
    for match in _partial_injections(len(a), len(b)):
        used = {j for j in match if j is not None}
        costs = [pair[i][j] if j is not None else da[i] for i, j in enumerate(match)]
        costs += [db[j] for j in range(len(b)) if j not in used]
        c = agg(costs) if costs else 0.0
        best = min(best, c)
    if math.isinf(p):
        return best
    return best ** (1.0 / p)


def brute_point_cloud_wasserstein(x, y, p):
    x, y = np.asarray(x, dtype=np.float64), np.asarray(y, dtype=np.float64)
    n = x.shape[0]
    cost = np.linalg.norm(x[:, None, :] - y[None, :, :], axis=2) ** p
    perms = _permutations(n)
    best = cost[np.arange(n), perms].sum(axis=1).min()
    return float((best / n) ** (1.0 / p))


_PERM_CACHE = {}


def _permutations(n):
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = np.array(list(itertools.permutations(range(n))), dtype=np.int64).reshape(-1, n)
    return _PERM_CACHE[n]


def central_difference(f, x, h=1e-5):
    x = np.array(x, dtype=np.float64)
    g = np.zeros_like(x)
    it = np.nditer(x, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        old = x[idx]
        x[idx] = old + h
        fp = f(x)
        x[idx] = old - h
        fm = f(x)
        x[idx] = old
        g[idx] = (fp - fm) / (2 * h)
    return g
