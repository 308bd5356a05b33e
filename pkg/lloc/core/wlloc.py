"""
Weighted LLOC on bucket indices

A WllocInstance stores w(i, j, k) for ordered distinct triples of [b] as a
dense (b, b, b) integer array; cells with repeated indices are always zero.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..errors import LengthMismatch
from ..utils.rng import make_rng
from ..utils.validators import validate_partition
from .instance import Instance

logger = logging.getLogger(__name__)


class RetractionConvention(str, Enum):
    """
    DIRECT:  w(i, j, k) counts triples in B_i x B_j x B_k
    LITERAL: w(i, j, k) counts triples in B_i x B_k x B_j
    """
    DIRECT = "direct"
    LITERAL = "literal"


def _distinct_mask(b: int) -> np.ndarray:
    i, j, k = np.ogrid[:b, :b, :b]
    return (i != j) & (i != k) & (j != k)


class WllocInstance:

    def __init__(self, weights: np.ndarray, convention: RetractionConvention = RetractionConvention.DIRECT):
        weights = np.asarray(weights)
        if weights.ndim != 3 or len(set(weights.shape)) != 1:
            raise ValueError(f"Weights must be a (b, b, b) array, got shape {weights.shape}")
        if not np.issubdtype(weights.dtype, np.integer):
            if not np.all(np.equal(np.mod(weights, 1), 0)):
                raise ValueError("Weights must be integers")
        weights = weights.astype(np.int64)
        if np.any(weights < 0):
            raise ValueError("Weights must be non-negative")
        if np.any(weights[~_distinct_mask(weights.shape[0])] != 0):
            raise ValueError("Weights on non-distinct triples must be zero")
        weights.setflags(write=False)
        self._weights = weights
        self.convention = RetractionConvention(convention)

    @classmethod
    def from_triples(cls, b: int, triples: Sequence[Tuple[int, int, int, int]],
                     convention: RetractionConvention = RetractionConvention.DIRECT) -> "WllocInstance":
        """Build from (i, j, k, weight) entries with 0-based indices"""
        weights = np.zeros((b, b, b), dtype=np.int64)
        for i, j, k, weight in triples:
            if len({i, j, k}) != 3:
                raise ValueError(f"Triple ({i}, {j}, {k}) is not distinct")
            weights[i, j, k] += weight
        return cls(weights, convention)

    @property
    def b(self) -> int:
        return int(self._weights.shape[0])

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    def weight(self, i: int, j: int, k: int) -> int:
        return int(self._weights[i, j, k])

    @property
    def total_weight(self) -> int:
        return int(self._weights.sum())

    def normalized(self) -> "WllocInstance":
        """Same instance in the DIRECT convention"""
        if self.convention is RetractionConvention.DIRECT:
            return self
        return WllocInstance(np.transpose(self._weights, (0, 2, 1)), RetractionConvention.DIRECT)

    def nonzero(self) -> List[Tuple[int, int, int, int]]:
        """(i, j, k, weight) for every nonzero weight, lexicographic"""
        cells = np.argwhere(self._weights != 0)
        return [(int(i), int(j), int(k), int(self._weights[i, j, k])) for i, j, k in cells]

    def __eq__(self, other) -> bool:
        if not isinstance(other, WllocInstance):
            return NotImplemented
        return self.convention == other.convention and np.array_equal(self._weights, other._weights)

    def __hash__(self) -> int:
        return hash((self.convention.value, self._weights.tobytes()))

    def __repr__(self) -> str:
        return f"WllocInstance(b={self.b}, total_weight={self.total_weight}, convention={self.convention.value})"


@dataclass(frozen=True)
class CellSolution:
    positions: Tuple[float, ...]
    violated_weight: int
    cells_examined: int
    exact: bool = True
    exact_positions: Optional[Tuple[Fraction, ...]] = field(default=None, compare=False, repr=False)


def retraction(inst: Instance, buckets: Sequence[Sequence[int]],
               convention: RetractionConvention = RetractionConvention.DIRECT) -> WllocInstance:
    """
    Contract the instance onto an ordered partition: every asserted triple with
    its three points in three distinct buckets adds one to the matching weight
    """
    buckets = validate_partition(buckets, inst.n)
    b = len(buckets)
    n = inst.n

    membership = np.zeros((n, b), dtype=np.float64)
    for j, bucket in enumerate(buckets):
        membership[bucket, j] = 1.0

    weights = np.zeros((b, b, b), dtype=np.int64)
    if b >= 3:
        for i, bucket in enumerate(buckets):
            # summed closer-matrices of all pivots in bucket i
            stacked = np.zeros((n, n), dtype=np.float64)
            for u in bucket:
                stacked += inst.closer_matrix(u)
            weights[i] = np.rint(membership.T @ stacked @ membership).astype(np.int64)
        weights[~_distinct_mask(b)] = 0

    if RetractionConvention(convention) is RetractionConvention.LITERAL:
        weights = np.ascontiguousarray(np.transpose(weights, (0, 2, 1)))

    logger.debug(f"Retraction onto {b} buckets: total weight {int(weights.sum())}")
    return WllocInstance(weights, convention)


def representative_retraction(inst: Instance, buckets: Sequence[Sequence[int]], seed: int,
                              convention: RetractionConvention = RetractionConvention.DIRECT
                              ) -> Tuple[WllocInstance, List[int]]:
    """
    Unit-weight restriction of the instance to one random point per bucket.
    Returns the instance and the chosen representatives in bucket order.
    """
    buckets = validate_partition(buckets, inst.n)
    rng = make_rng(seed)
    representatives = [int(bucket[rng.integers(len(bucket))]) for bucket in buckets]
    b = len(buckets)
    weights = np.zeros((b, b, b), dtype=np.int64)
    for i, r in enumerate(representatives):
        weights[i] = inst.closer_matrix(r)[np.ix_(representatives, representatives)]
    weights[~_distinct_mask(b)] = 0
    if RetractionConvention(convention) is RetractionConvention.LITERAL:
        weights = np.ascontiguousarray(np.transpose(weights, (0, 2, 1)))

    logger.debug(f"Representative retraction on points {representatives}")
    return WllocInstance(weights, convention), representatives


def _violated_mask(x: np.ndarray) -> np.ndarray:
    distance = np.abs(x[:, None] - x[None, :])
    satisfied = np.asarray(distance[:, :, None] < distance[:, None, :], dtype=bool)
    return ~satisfied


def evaluate(w: WllocInstance, positions: Sequence) -> int:
    """
    Total weight of violated constraints; ties violate.

    Positions containing Fractions are compared exactly.
    """
    if len(positions) != w.b:
        raise LengthMismatch(w.b, len(positions))
    weights = w.normalized().weights
    if any(isinstance(p, Fraction) for p in positions):
        x = np.asarray([Fraction(p) for p in positions], dtype=object)
        violated = _violated_mask(x)
    else:
        x = np.asarray(positions, dtype=float)
        violated = _violated_mask(x)
    return int(weights[violated].sum())


def _coordinate_candidates(x: np.ndarray, i: int) -> np.ndarray:
    """Interval midpoints of the breakpoints of coordinate i inside [0, 1]"""
    others = np.delete(x, i)
    midpoints = (others[:, None] + others[None, :]) / 2.0
    reflections = 2.0 * others[:, None] - others[None, :]
    breaks = np.concatenate([others, midpoints.ravel(), reflections.ravel(), [0.0, 1.0]])
    breaks = np.unique(breaks[(breaks >= 0.0) & (breaks <= 1.0)])
    return (breaks[:-1] + breaks[1:]) / 2.0


def _batch_violated(weights: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Violated weight for every row of a (c, b) position matrix"""
    distance = np.abs(candidates[:, :, None] - candidates[:, None, :])
    violated = ~(distance[:, :, :, None] < distance[:, :, None, :])
    return np.tensordot(violated.astype(np.int64), weights, axes=([1, 2, 3], [0, 1, 2]))


def _descend(weights: np.ndarray, x: np.ndarray, max_sweeps: int) -> Tuple[np.ndarray, int, int]:
    b = x.size
    current = int(_batch_violated(weights, x[None, :])[0])
    evaluated = 1
    for _ in range(max_sweeps):
        moved = False
        for i in range(b):
            values = _coordinate_candidates(x, i)
            if values.size == 0:
                continue
            batch = np.repeat(x[None, :], values.size, axis=0)
            batch[:, i] = values
            scores = _batch_violated(weights, batch)
            evaluated += values.size
            best = int(np.argmin(scores))
            if scores[best] < current:
                x = batch[best]
                current = int(scores[best])
                moved = True
        if not moved or current == 0:
            break
    return x, current, evaluated


def solve_heuristic(w: WllocInstance, restarts: int, seed: int, max_sweeps: int = 200) -> CellSolution:
    """
    Best of ``restarts`` coordinate-descent runs from uniform random starts.

    Along one coordinate the objective is piecewise constant, so one sample per
    interval between breakpoints finds the exact best move; a coordinate only
    moves on strict improvement.
    """
    if restarts < 1:
        raise ValueError(f"restarts must be at least 1, got {restarts}")
    weights = w.normalized().weights.astype(np.int64)
    b = w.b
    rng = make_rng(seed)

    best_x: Optional[np.ndarray] = None
    best_value: Optional[int] = None
    examined = 0
    for restart in range(restarts):
        start = rng.random(b)
        x, value, evaluated = _descend(weights, start, max_sweeps)
        examined += evaluated
        if best_value is None or value < best_value:
            best_x, best_value = x, value
            logger.debug(f"solve_heuristic restart {restart}: weight {value}")
        if best_value == 0:
            break

    return CellSolution(
        positions=tuple(float(v) for v in best_x),
        violated_weight=int(best_value),
        cells_examined=examined,
        exact=False,
    )
