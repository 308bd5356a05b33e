"""
Linear feasibility for systems A x <= b, x >= 0

Two solvers: an exact dictionary simplex over Fractions (Bland's rule, so it
always terminates), and scipy's HiGHS for large float systems.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from ..errors import Infeasible, NumericalFailure

logger = logging.getLogger(__name__)


def feasible_point(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> Optional[List[Fraction]]:
    """
    Exact point x >= 0 with rows @ x <= rhs, or None when none exists.

    Phase one of the simplex with a single auxiliary variable x0:
    maximize -x0 subject to rows @ x - x0 <= rhs. The system is feasible iff
    the optimum is zero.
    """
    m = len(rows)
    nvars = len(rows[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * nvars
    if all(value >= 0 for value in rhs):
        return [Fraction(0)] * nvars

    aux = nvars
    # variable ids: 0..nvars-1 original, nvars auxiliary, nvars+1.. slacks
    nonbasic = list(range(nvars + 1))
    basic = [nvars + 1 + i for i in range(m)]
    const = [Fraction(int(value)) if not isinstance(value, Fraction) else value for value in rhs]
    coef = [[Fraction(-int(a)) for a in row] + [Fraction(1)] for row in rows]
    objective = [Fraction(0)] * nvars + [Fraction(-1)]
    objective_const = Fraction(0)

    def pivot(r: int, e: int):
        nonlocal objective_const
        pivot_value = coef[r][e]
        new_row = [-c / pivot_value for c in coef[r]]
        new_row[e] = 1 / pivot_value
        new_const = -const[r] / pivot_value
        coef[r] = new_row
        const[r] = new_const
        for i in range(m):
            if i == r:
                continue
            factor = coef[i][e]
            if factor == 0:
                continue
            row = coef[i]
            for j in range(len(row)):
                if j == e:
                    row[j] = factor * new_row[e]
                elif new_row[j] != 0:
                    row[j] += factor * new_row[j]
            const[i] += factor * new_const
        factor = objective[e]
        if factor != 0:
            for j in range(len(objective)):
                if j == e:
                    objective[j] = factor * new_row[e]
                elif new_row[j] != 0:
                    objective[j] += factor * new_row[j]
            objective_const += factor * new_const
        basic[r], nonbasic[e] = nonbasic[e], basic[r]

    # make the dictionary feasible by bringing x0 in at the most violated row
    start = min(range(m), key=lambda i: (const[i], basic[i]))
    pivot(start, nonbasic.index(aux))

    iterations = 0
    while True:
        entering = [j for j in range(len(nonbasic)) if objective[j] > 0]
        if not entering:
            break
        e = min(entering, key=lambda j: nonbasic[j])
        leaving = None
        best_ratio = None
        for i in range(m):
            if coef[i][e] < 0:
                ratio = const[i] / -coef[i][e]
                if best_ratio is None or ratio < best_ratio or (ratio == best_ratio and basic[i] < basic[leaving]):
                    best_ratio = ratio
                    leaving = i
        if leaving is None:
            # objective is -x0 <= 0, so phase one is never unbounded
            raise NumericalFailure("Unbounded auxiliary problem")
        pivot(leaving, e)
        iterations += 1

    if objective_const < 0:
        logger.debug(f"Exact simplex: infeasible after {iterations} pivots")
        return None

    values = [Fraction(0)] * (nvars + 1 + m)
    for i, var in enumerate(basic):
        values[var] = const[i]
    logger.debug(f"Exact simplex: feasible after {iterations} pivots")
    return values[:nvars]


def strictly_negative_point(rows: Sequence[Sequence[int]], nvars: int,
                            lower: int = 1) -> Optional[List[Fraction]]:
    """
    Exact x >= lower with rows @ x <= -1, or None.

    For homogeneous rows this is equivalent to rows @ x < 0 with x > 0.
    """
    rows = [[int(a) for a in row] for row in rows]
    shifted = [-1 - sum(row) * lower for row in rows]
    point = feasible_point(rows, shifted) if len(rows) else [Fraction(0)] * nvars
    if point is None:
        return None
    return [value + lower for value in point]


def linprog_feasible(rows: np.ndarray, rhs: np.ndarray, certify_slack: float = 0.5) -> np.ndarray:
    """
    Float point x >= 0 with rows @ x <= rhs using HiGHS; rows may be a
    dense array or a scipy.sparse matrix.

    The result is certified to satisfy rows @ x <= rhs + certify_slack;
    a point that fails the check raises NumericalFailure.
    """
    if not sparse.issparse(rows):
        rows = np.asarray(rows, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    nvars = rows.shape[1]
    result = linprog(
        c=np.zeros(nvars),
        A_ub=rows,
        b_ub=rhs,
        bounds=[(0, None)] * nvars,
        method="highs",
    )
    if result.status == 2:
        raise Infeasible("LP has no feasible point")
    if result.status != 0 or result.x is None:
        raise NumericalFailure(f"HiGHS returned status {result.status}: {result.message}")

    x = np.asarray(result.x, dtype=float)
    residual = rows @ x - rhs
    if residual.size and float(residual.max()) > certify_slack:
        raise NumericalFailure(f"LP point misses a row by {float(residual.max()):.3g}")
    return x
