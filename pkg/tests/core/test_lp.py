"""
Tests for the exact simplex and the HiGHS wrapper
"""
from fractions import Fraction

import numpy as np
import pytest
from scipy import sparse

from lloc.core.lp import feasible_point, linprog_feasible, strictly_negative_point
from lloc.errors import Infeasible


def satisfies(rows, rhs, point) -> bool:
    return all(v >= 0 for v in point) and all(
        sum(Fraction(a) * x for a, x in zip(row, point)) <= r for row, r in zip(rows, rhs)
    )


class TestFeasiblePoint:

    @pytest.mark.core
    @pytest.mark.unit
    def test_origin_when_rhs_non_negative(self):
        """Test x = 0 is returned when it is already feasible"""
        assert feasible_point([[1, 2], [3, -1]], [0, 5]) == [0, 0]

    @pytest.mark.core
    @pytest.mark.unit
    def test_feasible_system(self):
        """Test a point satisfying x1 - x2 <= -1, x2 - x3 <= -2"""
        rows = [[1, -1, 0], [0, 1, -1]]
        rhs = [-1, -2]
        point = feasible_point(rows, rhs)

        assert point is not None
        assert all(isinstance(v, Fraction) for v in point)
        assert satisfies(rows, rhs, point)

    @pytest.mark.core
    @pytest.mark.unit
    def test_infeasible_system(self):
        """Test x1 - x2 <= -1 and x2 - x1 <= -1 have no solution"""
        assert feasible_point([[1, -1], [-1, 1]], [-1, -1]) is None

    @pytest.mark.core
    @pytest.mark.unit
    def test_fractional_vertex(self):
        """Test systems whose vertices are fractional"""
        rows = [[-2, -3], [1, 1]]
        rhs = [-7, 3]
        point = feasible_point(rows, rhs)

        assert point is not None
        assert satisfies(rows, rhs, point)

    @pytest.mark.core
    @pytest.mark.unit
    def test_degenerate_rows(self):
        """Test repeated rows terminate under Bland's rule"""
        rows = [[1, -1, 0]] * 4 + [[0, 1, -1]] * 3 + [[-1, 0, 0]]
        rhs = [-1] * 7 + [0]
        point = feasible_point(rows, rhs)

        assert point is not None
        assert satisfies(rows, rhs, point)


class TestStrictlyNegativePoint:

    @pytest.mark.core
    @pytest.mark.unit
    def test_lower_bound_and_slack(self):
        """Test x >= 1 and rows @ x <= -1"""
        rows = [[1, -1], [2, -3]]
        point = strictly_negative_point(rows, 2)

        assert point is not None
        assert all(v >= 1 for v in point)
        for row in rows:
            assert sum(a * x for a, x in zip(row, point)) <= -1

    @pytest.mark.core
    @pytest.mark.unit
    def test_no_rows(self):
        """Test the empty system returns the lower corner"""
        assert strictly_negative_point([], 3) == [1, 1, 1]

    @pytest.mark.core
    @pytest.mark.unit
    def test_contradiction(self):
        """Test opposite strict rows are infeasible"""
        assert strictly_negative_point([[1, -1], [-1, 1]], 2) is None

    @pytest.mark.core
    @pytest.mark.unit
    def test_all_positive_row(self):
        """Test a row with only positive coefficients cannot be negative on positive gaps"""
        assert strictly_negative_point([[1, 1, 0]], 3) is None


class TestLinprogFeasible:

    @pytest.mark.core
    @pytest.mark.unit
    def test_feasible(self):
        """Test HiGHS returns a certified point"""
        rows = np.array([[1.0, -1.0, 0.0], [0.0, 1.0, -1.0]])
        rhs = np.array([-1.0, -1.0])
        x = linprog_feasible(rows, rhs)

        assert x.shape == (3,)
        assert np.all(x >= -1e-9)
        assert np.all(rows @ x <= rhs + 0.5)

    @pytest.mark.core
    @pytest.mark.unit
    def test_sparse_rows(self):
        """Test scipy.sparse rows are accepted and certified"""
        rows = sparse.csr_matrix(np.array([[1.0, -1.0, 0.0], [0.0, 1.0, -1.0]]))
        rhs = np.array([-1.0, -1.0])
        x = linprog_feasible(rows, rhs)

        assert np.all(rows @ x <= rhs + 0.5)
        assert x[2] - x[0] >= 1.0

    @pytest.mark.core
    @pytest.mark.unit
    def test_infeasible(self):
        """Test HiGHS infeasibility maps to Infeasible"""
        rows = np.array([[1.0, -1.0], [-1.0, 1.0]])
        with pytest.raises(Infeasible):
            linprog_feasible(rows, np.array([-1.0, -1.0]))

    @pytest.mark.core
    @pytest.mark.unit
    def test_agrees_with_exact(self):
        """Test float and exact solvers agree on feasibility"""
        systems = [
            ([[1, -1, 0], [0, 1, -1]], [-1, -1]),
            ([[1, 1, -1], [-1, 0, 1]], [-1, -1]),
        ]
        for rows, rhs in systems:
            exact = feasible_point(rows, rhs)
            try:
                linprog_feasible(np.array(rows, dtype=float), np.array(rhs, dtype=float))
                float_feasible = True
            except Infeasible:
                float_feasible = False
            assert float_feasible == (exact is not None)
