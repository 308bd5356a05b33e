"""
Tests for the exact solver of perfectly satisfiable instances
"""
from unittest.mock import patch

import numpy as np
import pytest

from lloc.core import warmup
from lloc.core.arrangement import solve_exact
from lloc.core.generators import mixed_gap_positions
from lloc.core.instance import Instance, TieRule, from_embedding, mixed_gap_instance, violated_count
from lloc.core.lp import feasible_point
from lloc.core.warmup import LpMode, build_gap_system, lp_feasible, order_by_pivot, solve_zero
from lloc.core.wlloc import retraction
from lloc.errors import InconsistentComparator, Infeasible, NoPerfectEmbedding, NumericalFailure
from lloc.utils.helpers import pivot_pairs
from lloc.utils.rng import make_rng


def oracle_minimum(inst: Instance) -> int:
    w = retraction(inst, [[i] for i in range(inst.n)])
    return solve_exact(w).violated_weight


def flip_one(inst: Instance, slot: int) -> Instance:
    flat = inst.bits().reshape(-1)
    flat[slot] = ~flat[slot]
    return Instance.from_bits(flat.reshape(inst.n, inst.pairs_per_pivot))


def full_gap_rows(inst: Instance, ordering) -> np.ndarray:
    """One dense row per asserted triple, without any reduction"""
    n = inst.n
    rank = np.empty(n, dtype=np.int64)
    rank[list(ordering)] = np.arange(n)
    gaps = np.arange(n - 1)
    rows = []
    for u in range(n):
        v, w = pivot_pairs(n, u)
        for a, b, bit in zip(v.tolist(), w.tolist(), inst.pivot_bits(u).tolist()):
            near, far = (a, b) if bit else (b, a)
            spans = []
            for x in (near, far):
                lo, hi = sorted((rank[u], rank[x]))
                spans.append(((gaps >= lo) & (gaps < hi)).astype(np.int8))
            rows.append(spans[0] - spans[1])
    return np.array(rows)


class TestOrderByPivot:

    @pytest.mark.core
    @pytest.mark.unit
    def test_planted_order(self, planted_factory):
        """Test the leftmost point sorts the rest left to right"""
        inst, positions = planted_factory(12, seed=3)
        p = int(np.argmin(positions))

        assert order_by_pivot(inst, p) == [int(i) for i in np.argsort(positions)]

    @pytest.mark.core
    @pytest.mark.unit
    def test_inconsistent_comparator(self, planted_factory):
        """Test a cyclic comparator is reported with a witness pair"""
        inst, _ = planted_factory(5, seed=0)
        bits = inst.bits()
        # pivot 0 on points 1, 2, 3: 1 < 2 and 2 < 3 but 3 < 1
        slot = {pair: i for i, pair in enumerate([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)])}
        bits[0, slot[(1, 2)]] = True
        bits[0, slot[(2, 3)]] = True
        bits[0, slot[(1, 3)]] = False

        with pytest.raises(InconsistentComparator) as exc_info:
            order_by_pivot(Instance.from_bits(bits), 0)
        assert exc_info.value.pivot == 0


class TestGapSystem:

    @pytest.mark.core
    @pytest.mark.unit
    def test_row_count_is_quadratic(self, planted_factory):
        """Test the reduced system keeps O(n^2) rows over n - 1 gaps"""
        inst, positions = planted_factory(12, seed=1)
        system = build_gap_system(inst, order_by_pivot(inst, int(np.argmin(positions))))

        assert system.asserted == inst.total_constraints
        assert system.gap_count == 11
        assert 0 < system.row_count <= 12 * 12
        assert system.row_count < inst.total_constraints
        assert system.dense_rows().shape == (system.row_count, 11)
        assert set(np.unique(system.dense_rows()).tolist()) <= {-1, 0, 1}

    @pytest.mark.core
    @pytest.mark.unit
    def test_true_gaps_satisfy_rows(self, planted_factory):
        """Test the planted gaps make every row negative in both forms"""
        inst, positions = planted_factory(10, seed=2)
        ordering = [int(i) for i in np.argsort(positions)]
        system = build_gap_system(inst, ordering)
        gaps = np.diff(np.sort(positions))

        values = system.dense_rows() @ gaps
        assert np.all(values < 0)
        scaled = gaps / float(-values.max())
        prefix = np.cumsum(scaled)
        assert np.all(system.position_rows() @ prefix <= system.rhs() + 1e-9)

    @pytest.mark.core
    @pytest.mark.unit
    def test_matches_full_system(self):
        """Test the reduced system is feasible exactly when the full one is"""
        for trial in range(10):
            n = 4 + trial % 2
            positions = make_rng(200 + trial).random(n)
            clean = from_embedding(positions)
            if trial % 3 == 0:
                inst = clean
                ordering = [int(i) for i in np.argsort(positions)]
            else:
                slot = int(make_rng(300 + trial).integers(clean.total_constraints))
                inst = flip_one(clean, slot)
                ordering = list(range(n))
                make_rng(400 + trial).shuffle(ordering)

            reduced = build_gap_system(inst, ordering).dense_rows()
            full = full_gap_rows(inst, ordering)
            reduced_ok = feasible_point(reduced.tolist(), [-1] * reduced.shape[0]) is not None
            full_ok = feasible_point(full.tolist(), [-1] * full.shape[0]) is not None
            assert reduced_ok == full_ok
            # every reduced row is one of the full rows
            assert {tuple(r) for r in reduced.tolist()} <= {tuple(r) for r in full.tolist()}

    @pytest.mark.core
    @pytest.mark.unit
    def test_large_instance_stays_small(self, planted_factory):
        """Test a 150-point system fits in a few hundred kilobytes"""
        inst, positions = planted_factory(150, seed=3)
        system = build_gap_system(inst, order_by_pivot(inst, int(np.argmin(positions))))

        assert system.asserted == 150 * 149 * 148 // 2
        assert system.row_count <= 150 * 150
        assert system.position_rows().nnz <= 4 * system.row_count + 2 * 149

    @pytest.mark.core
    @pytest.mark.unit
    def test_lp_modes_agree(self, planted_factory):
        """Test float and rational LPs both find slack-one gaps"""
        inst, positions = planted_factory(7, seed=4)
        system = build_gap_system(inst, order_by_pivot(inst, int(np.argmin(positions))))
        rows = system.dense_rows()

        float_gaps = lp_feasible(system, LpMode.FLOAT)
        exact_gaps = lp_feasible(system, LpMode.RATIONAL)

        assert np.all(float_gaps >= 0)
        assert np.all(rows @ float_gaps <= -1 + 0.5)
        assert all(sum(int(a) * g for a, g in zip(row, exact_gaps)) <= -1 for row in rows)
        assert all(g >= 0 for g in exact_gaps)

    @pytest.mark.core
    @pytest.mark.unit
    def test_rational_infeasible(self, cyclic_three):
        """Test the rational LP raises Infeasible on an unrealizable ordering"""
        system = build_gap_system(cyclic_three, [0, 1, 2])
        with pytest.raises(Infeasible):
            lp_feasible(system, LpMode.RATIONAL)

    @pytest.mark.core
    @pytest.mark.unit
    def test_float_infeasible(self, cyclic_three):
        """Test HiGHS reports the same ordering as infeasible"""
        with pytest.raises(Infeasible):
            lp_feasible(build_gap_system(cyclic_three, [0, 1, 2]), LpMode.FLOAT)


class TestSolveZero:

    @pytest.mark.core
    @pytest.mark.unit
    def test_planted_instances(self, planted_factory):
        """Test planted instances are embedded without violations"""
        for n, seed in [(10, 0), (20, 1), (40, 2)]:
            inst, _ = planted_factory(n, seed=seed)
            embedding = solve_zero(inst)
            assert violated_count(inst, embedding) == 0

    @pytest.mark.core
    @pytest.mark.unit
    def test_rational_mode(self, planted_factory):
        """Test the rational LP mode gives a perfect embedding"""
        inst, _ = planted_factory(9, seed=5)
        assert violated_count(inst, solve_zero(inst, mode=LpMode.RATIONAL)) == 0

    @pytest.mark.core
    @pytest.mark.unit
    def test_three_points(self, three_points):
        """Test the smallest perfect instance"""
        assert violated_count(three_points, solve_zero(three_points)) == 0

    @pytest.mark.core
    @pytest.mark.unit
    def test_cyclic_three_has_no_perfect_embedding(self, cyclic_three):
        """Test the cyclic instance is reported and the oracle needs one violation"""
        with pytest.raises(NoPerfectEmbedding):
            solve_zero(cyclic_three)
        assert oracle_minimum(cyclic_three) == 1

    @pytest.mark.core
    @pytest.mark.unit
    def test_single_flip_agrees_with_oracle(self):
        """Test solve_zero succeeds exactly when the oracle finds zero violations"""
        outcomes = set()
        for trial in range(12):
            n = 4 + trial % 2
            inst = from_embedding(make_rng(trial).random(n))
            slot = int(make_rng(1000 + trial).integers(inst.total_constraints))
            flipped = flip_one(inst, slot)

            minimum = oracle_minimum(flipped)
            try:
                embedding = solve_zero(flipped)
            except NoPerfectEmbedding:
                perfect = False
            else:
                perfect = True
                assert violated_count(flipped, embedding) == 0
            assert perfect == (minimum == 0)
            outcomes.add(perfect)
        assert False in outcomes

    @pytest.mark.core
    @pytest.mark.unit
    def test_mixed_gap_family(self):
        """Test the mixed-gap family admits a perfect embedding"""
        for k in (3, 5, 10):
            inst = mixed_gap_instance(k)
            embedding = solve_zero(inst)
            assert violated_count(inst, embedding) == 0
            assert inst == from_embedding(mixed_gap_positions(k), tie_rule=TieRule.LOWER_INDEX_CLOSER)

    @pytest.mark.core
    @pytest.mark.unit
    def test_float_failure_falls_back_to_rational(self, planted_factory):
        """Test an uncertified float LP is retried with rational arithmetic"""
        inst, _ = planted_factory(6, seed=7)
        with patch.object(warmup, "linprog_feasible", side_effect=NumericalFailure("not certified")):
            embedding = solve_zero(inst)
        assert violated_count(inst, embedding) == 0
