from typing import List, Sequence

import numpy as np

from ..errors import InvalidPartition, LengthMismatch, NonFiniteInput, PointOutOfRange


def validate_point(index: int, n: int) -> int:
    """
    Validates a point index and returns it as int
    """
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
        raise TypeError(f"Point index must be an integer, got {type(index).__name__}")
    if index < 0 or index >= n:
        raise PointOutOfRange(int(index), n)
    return int(index)


def validate_positions(positions: Sequence[float], expected: int = None) -> np.ndarray:
    """
    Converts positions to a float array
    - must be one-dimensional and finite
    - must have `expected` entries when given
    """
    array = np.asarray(positions, dtype=float)
    if array.ndim != 1:
        raise NonFiniteInput(f"Positions must be one-dimensional, got shape {array.shape}")
    if expected is not None and array.size != expected:
        raise LengthMismatch(expected, int(array.size))
    if not np.all(np.isfinite(array)):
        raise NonFiniteInput("Positions must be finite")
    return array


def validate_partition(buckets: Sequence[Sequence[int]], n: int) -> List[List[int]]:
    """
    Checks that buckets are non-empty, disjoint and cover [n] exactly
    """
    result = [[int(x) for x in bucket] for bucket in buckets]
    if any(len(bucket) == 0 for bucket in result):
        raise InvalidPartition("Buckets must be non-empty")

    flat = [x for bucket in result for x in bucket]
    if len(flat) != n or sorted(flat) != list(range(n)):
        raise InvalidPartition(f"Buckets must partition the {n} points exactly")

    return result


def validate_ordering(ordering: Sequence[int], n: int) -> List[int]:
    """Ordering must be a permutation of [n]"""
    result = [int(x) for x in ordering]
    if sorted(result) != list(range(n)):
        raise InvalidPartition(f"Ordering must be a permutation of the {n} points")
    return result
