"""Counter-based random numbers for reproducible projection directions.

Value ``i`` of stream ``seed`` is the SplitMix64 finalizer applied to
``seed + (i + 1) * 0x9E3779B97F4A7C15`` (mod 2**64), i.e. the i-th output of a
SplitMix64 generator started at ``seed``.  Any value can be computed without
generating the ones before it, so direction ``k`` depends only on
``(seed, k)`` and results do not depend on numpy's generator internals.
"""
from __future__ import annotations

import numpy as np

GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
MIX_2 = np.uint64(0x94D049BB133111EB)
MASK64 = (1 << 64) - 1


def splitmix64(seed: int, counters) -> np.ndarray:
    """uint64 outputs at the given counter positions of stream ``seed``."""
    c = np.asarray(counters, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + (c + np.uint64(1)) * GOLDEN_GAMMA
    z = (z ^ (z >> np.uint64(30))) * MIX_1
    z = (z ^ (z >> np.uint64(27))) * MIX_2
    return z ^ (z >> np.uint64(31))


def uniform_open(seed: int, counters) -> np.ndarray:
    """Doubles in (0, 1] from the top 53 bits."""
    bits = splitmix64(seed, counters) >> np.uint64(11)
    return (bits.astype(np.float64) + 1.0) * (1.0 / 9007199254740992.0)


def standard_normal(seed: int, counters) -> np.ndarray:
    """Box-Muller normals; normal ``i`` consumes uniforms ``2i`` and ``2i + 1``."""
    c = np.asarray(counters, dtype=np.uint64)
    u1 = uniform_open(seed, c * np.uint64(2))
    u2 = uniform_open(seed, c * np.uint64(2) + np.uint64(1))
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


def derive_seed(master: int, *indices: int) -> int:
    """Child seed for a (master, i, j, ...) path, stable across runs and platforms."""
    s = master & MASK64
    for idx in indices:
        s = int(splitmix64(s, [idx & MASK64])[0])
    return s


def unit_directions(seed: int, count: int, dimension: int) -> np.ndarray:
    """``count`` unit vectors uniform on the sphere in R^dimension."""
    idx = np.arange(count * dimension, dtype=np.uint64)
    g = standard_normal(seed, idx).reshape(count, dimension)
    return g / np.linalg.norm(g, axis=1, keepdims=True)
