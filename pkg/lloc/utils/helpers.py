from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np


def choose2(m: int) -> int:
    """Binomial coefficient C(m, 2), zero for m < 2"""
    return m * (m - 1) // 2 if m >= 2 else 0


def constraints_per_pivot(n: int) -> int:
    return choose2(n - 1)


def total_constraints(n: int) -> int:
    """Number of (pivot, pair) slots of a dense instance on n points"""
    return n * constraints_per_pivot(n)


@lru_cache(maxsize=32)
def pair_indices(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lexicographic pairs (a, b), a < b, over the n - 1 non-pivot slots.

    For pivot u the actual points are a + (a >= u) and b + (b >= u).
    Arrays are read-only because the cache shares them.
    """
    a, b = np.triu_indices(n - 1, k=1)
    a = a.astype(np.int64)
    b = b.astype(np.int64)
    a.setflags(write=False)
    b.setflags(write=False)
    return a, b


def pivot_pairs(n: int, u: int) -> Tuple[np.ndarray, np.ndarray]:
    """Point pairs (v, w), v < w, v, w != u, in bitmap order for pivot u"""
    a, b = pair_indices(n)
    return a + (a >= u), b + (b >= u)


def min_positive_gap(values: Sequence[float]) -> Optional[float]:
    """Smallest positive difference between distinct values, None if there is none"""
    ordered = np.unique(np.asarray(values, dtype=float))
    if ordered.size < 2:
        return None
    return float(np.min(np.diff(ordered)))
