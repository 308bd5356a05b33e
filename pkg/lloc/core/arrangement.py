"""
Exact WLLOC by walking the cells of the constraint arrangement

A cell is fixed by a left-to-right ordering of the b coordinates plus, for
every pivot i and pair {j, k} lying on opposite sides of i, which of j, k is
nearer. Comparisons between two points on the same side of i follow from the
ordering alone. In gap coordinates (d_t = x_{t+1} - x_t in ordering order,
all d_t >= 1 by homogeneity) each opposite-side comparison is one linear form
whose sign is the choice; feasibility of a partial choice is decided exactly
with the rational simplex.

solve_exact runs a branch and bound over orderings and sign choices: the
lower bound of a partial cell is the cost already fixed plus, for every open
comparison, the cheaper of its two sides. Orderings are visited by increasing
bound and only strict improvements replace the incumbent, so the result is
deterministic.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from ..config import EXACT_CAP_DEFAULT, EXACT_CAP_MAX
from ..errors import ConfigError, TooLarge
from .lp import strictly_negative_point
from .wlloc import CellSolution, WllocInstance, evaluate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Split:
    """Opposite-side comparison: row @ d < 0 means ``near`` is closer to the pivot"""
    row: Tuple[int, ...]
    costs: Tuple[int, int]


@dataclass(frozen=True)
class CellRecord:
    ordering: Tuple[int, ...]
    signs: Tuple[int, ...]
    positions: Tuple[Fraction, ...]
    violated_weight: int


def _ordering_structure(weights, perm: Sequence[int]) -> Tuple[int, List[_Split]]:
    """Fixed cost of the ordering and its open comparisons"""
    b = len(perm)
    rank = [0] * b
    for r, point in enumerate(perm):
        rank[point] = r

    fixed = 0
    splits: List[_Split] = []
    for i in range(b):
        ri = rank[i]
        for j, k in itertools.combinations(range(b), 2):
            if i in (j, k):
                continue
            rj, rk = rank[j], rank[k]
            if (rj < ri) == (rk < ri):
                # same side: the point with nearer rank is closer
                near, far = (j, k) if abs(rj - ri) < abs(rk - ri) else (k, j)
                fixed += int(weights[i, far, near])
                continue
            left, right = (j, k) if rj < rk else (k, j)
            lo, hi = rank[left], rank[right]
            row = [0] * (b - 1)
            for t in range(lo, ri):
                row[t] += 1
            for t in range(ri, hi):
                row[t] -= 1
            # side 0: row @ d < 0, left is closer, so "right closer" is violated
            splits.append(_Split(row=tuple(row), costs=(int(weights[i, right, left]), int(weights[i, left, right]))))
    return fixed, splits


def _signed(row: Sequence[int], side: int) -> List[int]:
    return list(row) if side == 0 else [-a for a in row]


def _strictly_inside(row: Sequence[int], side: int, point: Sequence[Fraction]) -> bool:
    value = sum(a * d for a, d in zip(row, point))
    return value < 0 if side == 0 else value > 0


def _positions_from_gaps(perm: Sequence[int], gaps: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Integer-scaled prefix sums mapped into the open interval (0, 1)"""
    scale = 1
    for g in gaps:
        scale = scale * g.denominator // math.gcd(scale, g.denominator)
    integer_gaps = [int(g * scale) for g in gaps]
    prefix = [0]
    for g in integer_gaps:
        prefix.append(prefix[-1] + g)
    total = prefix[-1]
    positions = [Fraction(0)] * len(perm)
    for r, point in enumerate(perm):
        positions[point] = Fraction(prefix[r] + 1, total + 2)
    return tuple(positions)


def _trivial_solution(b: int) -> CellSolution:
    exact = tuple(Fraction(t + 1, b + 1) for t in range(b))
    return CellSolution(positions=tuple(float(p) for p in exact), violated_weight=0,
                        cells_examined=1, exact=True, exact_positions=exact)


class _BranchAndBound:

    def __init__(self, weights, b: int):
        self.weights = weights
        self.b = b
        self.best_cost: Optional[int] = None
        self.best_perm: Optional[Tuple[int, ...]] = None
        self.best_gaps: Optional[List[Fraction]] = None
        self.leaves = 0
        self.lp_calls = 0

    def run(self, perm: Tuple[int, ...], fixed: int, splits: List[_Split]):
        # larger cost gaps first: they tighten the bound fastest
        order = sorted(range(len(splits)), key=lambda s: (-abs(splits[s].costs[0] - splits[s].costs[1]), s))
        ordered = [splits[s] for s in order]
        optimistic = [min(s.costs) for s in ordered]
        suffix = [0] * (len(ordered) + 1)
        for t in range(len(ordered) - 1, -1, -1):
            suffix[t] = suffix[t + 1] + optimistic[t]

        witness = [Fraction(1)] * (self.b - 1)
        self._dfs(perm, ordered, suffix, 0, fixed, [], witness)

    def _dfs(self, perm, splits: List[_Split], suffix: List[int], depth: int, cost: int,
             rows: List[List[int]], witness: List[Fraction]):
        if self.best_cost is not None and cost + suffix[depth] >= self.best_cost:
            return
        if depth == len(splits):
            self.leaves += 1
            self.best_cost = cost
            self.best_perm = perm
            self.best_gaps = witness
            return

        split = splits[depth]
        sides = sorted((0, 1), key=lambda side: (split.costs[side], not _strictly_inside(split.row, side, witness), side))
        for side in sides:
            new_cost = cost + split.costs[side]
            if self.best_cost is not None and new_cost + suffix[depth + 1] >= self.best_cost:
                continue
            signed = _signed(split.row, side)
            new_rows = rows + [signed]
            if _strictly_inside(split.row, side, witness):
                point = witness
            else:
                self.lp_calls += 1
                point = strictly_negative_point(new_rows, self.b - 1)
                if point is None:
                    continue
            self._dfs(perm, splits, suffix, depth + 1, new_cost, new_rows, point)


def solve_exact(w: WllocInstance, exact_cap: int = EXACT_CAP_DEFAULT) -> CellSolution:
    """
    Global minimum violated weight over all position vectors in [0, 1]^b.

    Raises TooLarge when b exceeds exact_cap; exact_cap itself may not
    exceed EXACT_CAP_MAX.
    """
    if exact_cap < 1 or exact_cap > EXACT_CAP_MAX:
        raise ConfigError(f"exact_cap must be in [1, {EXACT_CAP_MAX}], got {exact_cap}")
    b = w.b
    if b > exact_cap:
        raise TooLarge("WLLOC instance", b, exact_cap)
    if b <= 2:
        return _trivial_solution(b)

    weights = w.normalized().weights
    # reflections give mirror cells with equal cost, keep perm[0] < perm[-1]
    candidates = []
    for perm in itertools.permutations(range(b)):
        if perm[0] > perm[-1]:
            continue
        fixed, splits = _ordering_structure(weights, perm)
        bound = fixed + sum(min(s.costs) for s in splits)
        candidates.append((bound, perm, fixed, splits))
    candidates.sort(key=lambda c: (c[0], c[1]))

    search = _BranchAndBound(weights, b)
    for bound, perm, fixed, splits in candidates:
        if search.best_cost is not None and bound >= search.best_cost:
            break
        search.run(perm, fixed, splits)

    exact_positions = _positions_from_gaps(search.best_perm, search.best_gaps)
    violated = evaluate(w, list(exact_positions))
    if violated != search.best_cost:
        raise AssertionError(f"cell cost {search.best_cost} disagrees with evaluation {violated}")

    logger.debug(
        f"solve_exact b={b}: weight {violated}, {search.leaves} improving cells, "
        f"{search.lp_calls} LP calls"
    )
    return CellSolution(
        positions=tuple(float(p) for p in exact_positions),
        violated_weight=violated,
        cells_examined=search.leaves + search.lp_calls,
        exact=True,
        exact_positions=exact_positions,
    )


def enumerate_cells(w: WllocInstance, exact_cap: int = 4) -> Iterator[CellRecord]:
    """
    Every realizable (ordering, sign vector) cell with an exact interior point.
    Exhaustive and exponential; meant as an oracle for very small b.
    """
    b = w.b
    if b > exact_cap:
        raise TooLarge("cell enumeration", b, exact_cap)
    weights = w.normalized().weights
    for perm in itertools.permutations(range(b)):
        fixed, splits = _ordering_structure(weights, perm)
        for signs in itertools.product((0, 1), repeat=len(splits)):
            rows = [_signed(s.row, side) for s, side in zip(splits, signs)]
            gaps = strictly_negative_point(rows, b - 1) if b > 1 else []
            if gaps is None:
                continue
            positions = _positions_from_gaps(perm, gaps)
            cost = fixed + sum(s.costs[side] for s, side in zip(splits, signs))
            yield CellRecord(ordering=perm, signs=signs, positions=positions, violated_weight=cost)
