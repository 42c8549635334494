import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from topalign.assignment import has_perfect_matching, linear_assignment


def test_known_assignment():
    cost = np.array([[4.0, 1, 3], [2, 0, 5], [3, 2, 2]])
    cols, total = linear_assignment(cost)
    assert total == 5.0 and sorted(cols.tolist()) == [0, 1, 2]


def test_empty_problem():
    cols, total = linear_assignment(np.zeros((0, 0)))
    assert cols.size == 0 and total == 0.0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_matches_permutation_enumeration(seed, n):
    cost = np.random.default_rng(seed).uniform(0, 10, (n, n))
    _, total = linear_assignment(cost)
    best = min(cost[np.arange(n), list(p)].sum() for p in itertools.permutations(range(n)))
    assert total == pytest.approx(best, rel=1e-12, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 60), st.booleans())
def test_matches_scipy(seed, n, integer):
    rng = np.random.default_rng(seed)
    cost = rng.integers(0, 5, (n, n)).astype(float) if integer else rng.standard_normal((n, n))
    cols, total = linear_assignment(cost)
    r, c = linear_sum_assignment(cost)
    assert sorted(cols.tolist()) == list(range(n))
    assert total == pytest.approx(cost[r, c].sum(), rel=1e-10, abs=1e-10)
    assert cost[np.arange(n), cols].sum() == pytest.approx(total, rel=1e-12, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 12), st.floats(0.05, 0.9))
def test_perfect_matching_matches_scipy(seed, n, density):
    adj = np.random.default_rng(seed).uniform(size=(n, n)) < density
    m = maximum_bipartite_matching(csr_matrix(adj.astype(np.int8)), perm_type="column")
    assert has_perfect_matching(adj) == bool(np.all(m >= 0))


def test_reject_non_square():
    with pytest.raises(ValueError):
        linear_assignment(np.zeros((2, 3)))
