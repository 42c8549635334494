"""Exact linear assignment and bipartite matching used by the transport distances."""
from __future__ import annotations

import numpy as np

from .errors import InvalidInput


def linear_assignment(cost) -> tuple[np.ndarray, float]:
    """Minimum-cost perfect matching on a square cost matrix.

    Shortest augmenting path form of the Hungarian method with row/column
    potentials, O(n^3).  Returns ``(col_of_row, total_cost)``.
    """
    c = np.asarray(cost, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise InvalidInput(f"cost matrix must be square, got shape {c.shape}")
    n = c.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64), 0.0
    if not np.all(np.isfinite(c)):
        raise InvalidInput("cost matrix must be finite")

    # index 0 is a virtual column; real columns are 1..n
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    row_of_col = np.zeros(n + 1, dtype=np.int64)  # 0 = free, else row + 1
    way = np.zeros(n + 1, dtype=np.int64)
    padded = np.empty((n, n + 1))
    padded[:, 0] = 0.0
    padded[:, 1:] = c

    for i in range(1, n + 1):
        row_of_col[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of_col[j0]
            free = ~used
            cur = padded[i0 - 1] - u[i0] - v
            better = free & (cur < minv)
            minv[better] = cur[better]
            way[better] = j0
            masked = np.where(free, minv, np.inf)
            j1 = int(np.argmin(masked))
            delta = masked[j1]
            u[row_of_col[used]] += delta
            v[used] -= delta
            minv[free] -= delta
            j0 = j1
            if row_of_col[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            row_of_col[j0] = row_of_col[j1]
            j0 = j1

    col_of_row = np.empty(n, dtype=np.int64)
    col_of_row[row_of_col[1:] - 1] = np.arange(n)
    total = float(c[np.arange(n), col_of_row].sum())
    return col_of_row, total


def has_perfect_matching(adj) -> bool:
    """Whether a square boolean biadjacency matrix admits a perfect matching."""
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    if n == 0:
        return True
    if not adj.any(axis=1).all() or not adj.any(axis=0).all():
        return False
    nbrs = [np.flatnonzero(row).tolist() for row in adj]
    row_of_col = [-1] * n
    col_of_row = [-1] * n
    for r in range(n):
        if not _augment(r, nbrs, row_of_col, col_of_row):
            return False
    return True


def _augment(root, nbrs, row_of_col, col_of_row) -> bool:
    # breadth-first search for an alternating path from a free row to a free column
    reached_from = {}
    queue = [root]
    for row in queue:
        for col in nbrs[row]:
            if col in reached_from:
                continue
            reached_from[col] = row
            if row_of_col[col] == -1:
                while True:
                    r = reached_from[col]
                    prev = col_of_row[r]
                    row_of_col[col] = r
                    col_of_row[r] = col
                    if r == root:
                        return True
                    col = prev
            queue.append(row_of_col[col])
    return False
