"""
Position generators for planted instances.

All generators return plain float arrays; turning them into instances is the
job of ``instance.from_embedding``.
"""

from typing import Sequence

import numpy as np

from ..utils.rng import make_rng


def uniform_positions(n: int, seed: int) -> np.ndarray:
    """n positions drawn i.i.d. from [0, 1)"""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return make_rng(seed).random(n)


def clustered_positions(n: int, clusters: int, spread: float, seed: int) -> np.ndarray:
    """
    Cluster centers uniform in [0, 1), then point i goes to cluster i % clusters
    at its center plus a uniform offset in [-spread, spread]
    """
    if clusters < 1 or clusters > n:
        raise ValueError(f"clusters must be in [1, n], got {clusters}")
    if spread < 0:
        raise ValueError(f"spread must be non-negative, got {spread}")

    rng = make_rng(seed)
    centers = rng.random(clusters)
    assignment = np.arange(n) % clusters
    offsets = rng.uniform(-spread, spread, size=n)
    return centers[assignment] + offsets


def planted_cluster_positions(sizes: Sequence[int], centers: Sequence[float], spread: float, seed: int) -> np.ndarray:
    """
    Contiguous clusters: the first sizes[0] points around centers[0], and so on.
    Used for bucket-aligned geometries where every bucket is one cluster.
    """
    if len(sizes) != len(centers):
        raise ValueError("sizes and centers must have equal length")
    rng = make_rng(seed)
    parts = [c + rng.uniform(-spread, spread, size=s) for s, c in zip(sizes, centers)]
    return np.concatenate(parts) if parts else np.zeros(0)


def mixed_gap_positions(k: int) -> np.ndarray:
    """
    X = {0, 2, 4, ..., 2k} followed by {2k+1, 2k+2, ..., 3k}: 2k + 1 points
    whose left half has double spacing
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    left = np.arange(0, 2 * k + 1, 2, dtype=float)
    right = np.arange(2 * k + 1, 3 * k + 1, dtype=float)
    return np.concatenate([left, right])


def equally_spaced(n: int) -> np.ndarray:
    """Rank embedding g(u_i) = i"""
    return np.arange(n, dtype=float)
