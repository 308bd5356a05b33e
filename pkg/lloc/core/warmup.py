"""
Exact algorithm for perfectly satisfiable instances

Guess the leftmost point p, sort the others by the comparator of p, then look
for consecutive gaps that satisfy every constraint with slack one.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from ..errors import InconsistentComparator, Infeasible, NoPerfectEmbedding, NumericalFailure
from ..utils.helpers import pivot_pairs
from ..utils.validators import validate_ordering, validate_point
from .instance import Embedding, Instance, violated_count
from .lp import feasible_point, linprog_feasible

logger = logging.getLogger(__name__)


class LpMode(str, Enum):
    FLOAT = "float"
    RATIONAL = "rational"


@dataclass(frozen=True)
class GapSystem:
    """
    Reduced constraint system over the n - 1 consecutive gaps of ``ordering``.

    Each row of ``terms`` is (a, b, c, d) over ranks and stands for
    (x[b] - x[a]) - (x[d] - x[c]) <= -1, where x[t] is the prefix sum of
    the first t gaps; a == b or c == d marks an empty interval. Rows shared
    by several pivots appear once, and a row implied by a stronger row of
    the same pivot is dropped, so the row count is O(n^2) instead of
    n * C(n - 1, 2). Feasibility equals that of the full system.
    """
    ordering: Tuple[int, ...]
    terms: np.ndarray
    asserted: int

    @property
    def gap_count(self) -> int:
        return len(self.ordering) - 1

    @property
    def row_count(self) -> int:
        return int(self.terms.shape[0])

    def dense_rows(self) -> np.ndarray:
        """rows @ gaps <= -1 as a dense (row_count, n - 1) int8 matrix"""
        gaps = np.arange(self.gap_count)[None, :]
        a, b, c, d = (self.terms[:, i, None] for i in range(4))
        plus = (gaps >= a) & (gaps < b)
        minus = (gaps >= c) & (gaps < d)
        return plus.astype(np.int8) - minus.astype(np.int8)

    def position_rows(self) -> sparse.csr_matrix:
        """
        The same rows over prefix positions x[1..n-1] (x[0] = 0) followed by
        the chain x[t] - x[t + 1] <= 0, at most four nonzeros per row
        """
        m, size = self.row_count, self.gap_count
        row_ids = np.repeat(np.arange(m), 4)
        cols = self.terms.reshape(-1)
        signs = np.tile(np.array([-1.0, 1.0, 1.0, -1.0]), m)
        keep = cols > 0
        chain = np.arange(size - 1)
        row_ids = np.concatenate([row_ids[keep], m + chain, m + chain])
        col_ids = np.concatenate([cols[keep] - 1, chain, chain + 1])
        values = np.concatenate([signs[keep], np.ones(size - 1), -np.ones(size - 1)])
        shape = (m + size - 1, size)
        return sparse.coo_matrix((values, (row_ids, col_ids)), shape=shape).tocsr()

    def rhs(self) -> np.ndarray:
        return np.concatenate([-np.ones(self.row_count), np.zeros(max(self.gap_count - 1, 0))])


def order_by_pivot(inst: Instance, p: int) -> List[int]:
    """
    p followed by the other points sorted by the comparator of p, after
    checking that the comparator is a strict total order
    """
    p = validate_point(p, inst.n)
    closer = inst.closer_matrix(p)
    others = [x for x in range(inst.n) if x != p]
    ranked = sorted(others, key=cmp_to_key(lambda a, b: -1 if closer[a, b] else 1))

    ranked_closer = closer[np.ix_(ranked, ranked)]
    upper = np.triu(np.ones_like(ranked_closer, dtype=bool), k=1)
    broken = np.argwhere(upper & ~ranked_closer)
    if broken.size:
        a, b = (int(t) for t in broken[0])
        raise InconsistentComparator(p, ranked[a], ranked[b])

    return [p] + ranked


def _opposite_side_terms(r: int, near: np.ndarray, far: np.ndarray, n: int) -> List[np.ndarray]:
    """
    Rows of one pivot at rank r whose near and far points lie on opposite
    sides; for each near point only the strongest far point is kept
    """
    blocks = []
    left = (near < r) & (far > r)
    if left.any():
        # (x[r] - x[v]) - (x[far] - x[r]) <= -1 is strongest for the smallest far
        best = np.full(n, n, dtype=np.int64)
        np.minimum.at(best, near[left], far[left])
        v = np.flatnonzero(best < n)
        pivot = np.full(v.size, r, dtype=np.int64)
        blocks.append(np.column_stack([v, pivot, pivot, best[v]]))
    right = (near > r) & (far < r)
    if right.any():
        # (x[v] - x[r]) - (x[r] - x[far]) <= -1 is strongest for the largest far
        best = np.full(n, -1, dtype=np.int64)
        np.maximum.at(best, near[right], far[right])
        v = np.flatnonzero(best >= 0)
        pivot = np.full(v.size, r, dtype=np.int64)
        blocks.append(np.column_stack([pivot, v, best[v], pivot]))
    return blocks


def build_gap_system(inst: Instance, ordering: Sequence[int]) -> GapSystem:
    """
    Reduced gap system of the n * C(n - 1, 2) asserted triples, built one
    pivot at a time
    """
    n = inst.n
    ordering = validate_ordering(ordering, n)
    rank = np.empty(n, dtype=np.int64)
    rank[ordering] = np.arange(n)

    # same-side rows only depend on the pair of ranks: near between pivot and
    # far asks for x[hi] - x[lo] >= 1, the other way round is unsatisfiable
    separated = np.zeros((n, n), dtype=bool)
    contradicted = np.zeros((n, n), dtype=bool)
    blocks = []
    for u in range(n):
        v, w = pivot_pairs(n, u)
        bits = inst.pivot_bits(u)
        near = rank[np.where(bits, v, w)]
        far = rank[np.where(bits, w, v)]
        r = int(rank[u])

        same = (near < r) == (far < r)
        consistent = np.abs(near - r) < np.abs(far - r)
        lo = np.minimum(near, far)
        hi = np.maximum(near, far)
        separated[lo[same & consistent], hi[same & consistent]] = True
        contradicted[lo[same & ~consistent], hi[same & ~consistent]] = True
        blocks.extend(_opposite_side_terms(r, near[~same], far[~same], n))

    # x[hi] - x[lo] >= 1 for the smallest hi implies it for every larger hi
    starts = np.flatnonzero(separated.any(axis=1))
    zeros = np.zeros(starts.size, dtype=np.int64)
    blocks.append(np.column_stack([zeros, zeros, starts, separated[starts].argmax(axis=1)]))
    bad = np.argwhere(contradicted)
    blocks.append(np.column_stack([bad[:, 0], bad[:, 1], np.zeros((bad.shape[0], 2), dtype=np.int64)]))

    terms = np.concatenate(blocks).astype(np.int64)
    if terms.shape[0]:
        terms = np.unique(terms, axis=0)
    terms.setflags(write=False)
    logger.debug(f"Gap system for n={n}: {terms.shape[0]} rows from {inst.total_constraints} triples")
    return GapSystem(ordering=tuple(ordering), terms=terms, asserted=inst.total_constraints)


def lp_feasible(system: GapSystem, mode: LpMode = LpMode.FLOAT) -> Union[np.ndarray, List[Fraction]]:
    """
    Gaps d >= 0 with every row at most -1.

    FLOAT solves the sparse position form with HiGHS and returns a float
    array certified to slack 0.5, raising NumericalFailure otherwise;
    RATIONAL runs the exact simplex on the dense gap rows.
    """
    mode = LpMode(mode)
    if system.gap_count == 0:
        return np.zeros(0) if mode is LpMode.FLOAT else []
    if system.row_count == 0:
        return np.ones(system.gap_count) if mode is LpMode.FLOAT else [Fraction(1)] * system.gap_count

    if mode is LpMode.FLOAT:
        x = linprog_feasible(system.position_rows(), system.rhs())
        return np.maximum(np.diff(np.concatenate([[0.0], x])), 0.0)

    rows = system.dense_rows()
    point = feasible_point(rows.tolist(), [-1] * rows.shape[0])
    if point is None:
        raise Infeasible("Gap system has no feasible point")
    return point


def _positions(ordering: Sequence[int], gaps) -> np.ndarray:
    if gaps and isinstance(gaps[0], Fraction):
        scale = 1
        for g in gaps:
            scale = math.lcm(scale, g.denominator)
        gaps = [int(g * scale) for g in gaps]
    prefix = np.concatenate([[0.0], np.cumsum(np.asarray(gaps, dtype=float))])
    positions = np.empty(len(ordering), dtype=float)
    positions[list(ordering)] = prefix
    return positions


def _attempt(inst: Instance, p: int, mode: LpMode) -> Optional[Embedding]:
    try:
        ordering = order_by_pivot(inst, p)
    except InconsistentComparator as e:
        logger.debug(f"Pivot {p} rejected: {e}")
        return None

    system = build_gap_system(inst, ordering)
    modes = [LpMode.FLOAT, LpMode.RATIONAL] if mode is LpMode.FLOAT else [LpMode.RATIONAL]
    for current in modes:
        try:
            gaps = lp_feasible(system, current)
        except Infeasible:
            logger.debug(f"Pivot {p}: gap system infeasible")
            return None
        except NumericalFailure as e:
            logger.warning(f"Pivot {p}: float LP not certified ({e}), retrying with rational arithmetic")
            continue

        positions = _positions(ordering, list(gaps))
        if violated_count(inst, positions) == 0:
            return Embedding(positions)
        logger.warning(f"Pivot {p}: {current.value} LP point failed verification")
    return None


def solve_zero(inst: Instance, mode: LpMode = LpMode.FLOAT) -> Embedding:
    """
    An embedding with zero violations, trying pivots in ascending order;
    raises NoPerfectEmbedding when none exists
    """
    mode = LpMode(mode)
    if inst.n < 3:
        return Embedding(np.arange(inst.n, dtype=float))

    for p in range(inst.n):
        embedding = _attempt(inst, p, mode)
        if embedding is not None:
            logger.info(f"Perfect embedding found with leftmost point {p}")
            return embedding

    raise NoPerfectEmbedding(f"No embedding of the {inst.n} points satisfies every constraint")
