"""Deterministic random streams built on splitmix64.

Every stochastic component of the judge (weight init, shuffling, synthetic
data, genetic mutation, random starts) draws from one of these streams so
that golden values survive reimplementation in any language: the k-th
output of a stream depends only on (seed, k).
"""

from __future__ import annotations

import numpy as np

_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def mix64(x: int) -> int:
    """The splitmix64 finalizer on a single 64-bit value."""
    z = x & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return z ^ (z >> 31)


def _mix_array(states: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = states
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def derive_seed(seed: int, tag: str) -> int:
    """Stable child seed for a named sub-stream (init, shuffle, ...)."""
    h = 0xCBF29CE484222325  # FNV-1a
    for byte in tag.encode("utf-8"):
        h = ((h ^ byte) * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return mix64((seed & 0xFFFFFFFFFFFFFFFF) ^ h)


class Rng:
    """Counter-based splitmix64 stream: output k is mix(seed + (k+1)*GOLDEN)."""

    def __init__(self, seed: int):
        self._seed = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
        self._count = 0

    def fork(self, tag: str) -> "Rng":
        return Rng(derive_seed(int(self._seed), tag))

    def next_u64(self, n: int) -> np.ndarray:
        ks = np.arange(self._count + 1, self._count + n + 1, dtype=np.uint64)
        self._count += n
        with np.errstate(over="ignore"):
            states = self._seed + ks * _GOLDEN
        return _mix_array(states)

    def uniform(self, n: int) -> np.ndarray:
        """n doubles uniform in [0, 1)."""
        return (self.next_u64(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def uniform_range(self, n: int, low: float, high: float) -> np.ndarray:
        return low + (high - low) * self.uniform(n)

    def normal(self, n: int) -> np.ndarray:
        """n standard normals via Box-Muller on consecutive uniform pairs."""
        m = (n + 1) // 2
        u = self.uniform(2 * m)
        u1 = np.maximum(u[0::2], 2.0**-53)  # avoid log(0)
        u2 = u[1::2]
        r = np.sqrt(-2.0 * np.log(u1))
        theta = 2.0 * np.pi * u2
        out = np.empty(2 * m, dtype=np.float64)
        out[0::2] = r * np.cos(theta)
        out[1::2] = r * np.sin(theta)
        return out[:n]

    def shuffle_index(self, n: int) -> np.ndarray:
        """Deterministic Fisher-Yates permutation of range(n)."""
        idx = np.arange(n)
        if n < 2:
            return idx
        draws = self.uniform(n - 1)
        for i in range(n - 1, 0, -1):
            j = int(draws[n - 1 - i] * (i + 1))
            idx[i], idx[j] = idx[j], idx[i]
        return idx

    def randint(self, n: int, upper: int) -> np.ndarray:
        """n integers uniform in [0, upper) (by scaling, fine at desk scale)."""
        return np.minimum((self.uniform(n) * upper).astype(np.int64), upper - 1)
