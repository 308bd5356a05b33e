"""
Tests for weighted instances, retraction and the coordinate-descent heuristic
"""
from fractions import Fraction

import numpy as np
import pytest

from lloc.core.wlloc import (
    RetractionConvention,
    WllocInstance,
    evaluate,
    representative_retraction,
    retraction,
    solve_heuristic,
)
from lloc.errors import InvalidPartition, LengthMismatch
from lloc.utils.rng import make_rng

SIX_BUCKETS = [[0, 1], [2, 3], [4, 5]]


def random_wlloc(b: int, seed: int, high: int = 10) -> WllocInstance:
    rng = make_rng(seed)
    weights = rng.integers(0, high, size=(b, b, b))
    i, j, k = np.ogrid[:b, :b, :b]
    weights[(i == j) | (i == k) | (j == k)] = 0
    return WllocInstance(weights)


class TestWllocInstance:

    @pytest.mark.core
    @pytest.mark.unit
    def test_from_triples(self, calibration_wlloc):
        """Test weights land on their cells"""
        assert calibration_wlloc.b == 3
        assert calibration_wlloc.weight(0, 1, 2) == 5
        assert calibration_wlloc.weight(2, 1, 0) == 0
        assert calibration_wlloc.total_weight == 15
        assert (0, 1, 2, 5) in calibration_wlloc.nonzero()
        assert len(calibration_wlloc.nonzero()) == 5

    @pytest.mark.core
    @pytest.mark.unit
    def test_rejects_invalid_weights(self):
        """Test negative, fractional and non-distinct weights are rejected"""
        weights = np.zeros((3, 3, 3), dtype=np.int64)
        weights[0, 1, 2] = -1
        with pytest.raises(ValueError):
            WllocInstance(weights)

        weights = np.zeros((3, 3, 3))
        weights[0, 1, 2] = 0.5
        with pytest.raises(ValueError):
            WllocInstance(weights)

        weights = np.zeros((3, 3, 3), dtype=np.int64)
        weights[0, 0, 1] = 1
        with pytest.raises(ValueError):
            WllocInstance(weights)

        with pytest.raises(ValueError):
            WllocInstance.from_triples(3, [(0, 0, 1, 2)])

    @pytest.mark.core
    @pytest.mark.unit
    def test_normalized_literal(self):
        """Test the literal convention swaps the last two indices"""
        literal = WllocInstance.from_triples(3, [(0, 2, 1, 4)], convention=RetractionConvention.LITERAL)
        direct = literal.normalized()

        assert direct.convention is RetractionConvention.DIRECT
        assert direct.weight(0, 1, 2) == 4
        assert direct.weight(0, 2, 1) == 0
        assert direct.normalized() is direct


class TestEvaluate:

    @pytest.mark.core
    @pytest.mark.unit
    def test_single_constraint(self):
        """Test w(1,2,3)=8 is satisfied by (0, 0.1, 0.9) and violated by (0, 0.9, 0.1)"""
        w = WllocInstance.from_triples(3, [(0, 1, 2, 8)])

        assert evaluate(w, [0.0, 0.1, 0.9]) == 0
        assert evaluate(w, [0.0, 0.9, 0.1]) == 8

    @pytest.mark.core
    @pytest.mark.unit
    def test_ties_violate(self, calibration_wlloc):
        """Test coincident positions violate every constraint"""
        assert evaluate(calibration_wlloc, [0.5, 0.5, 0.5]) == calibration_wlloc.total_weight

    @pytest.mark.core
    @pytest.mark.unit
    def test_calibration_middle_point(self, calibration_wlloc):
        """Test x2 < x1 < x3 with the first gap shorter costs 4"""
        assert evaluate(calibration_wlloc, [0.3, 0.1, 0.9]) == 4

    @pytest.mark.core
    @pytest.mark.unit
    def test_fractions_match_floats(self):
        """Test exact and float evaluation agree away from ties"""
        w = random_wlloc(5, 3)
        # numerators form a Golomb ruler, so no two distances tie
        exact = [Fraction(3, 13), Fraction(12, 13), Fraction(0), Fraction(7, 13), Fraction(1, 13)]

        assert evaluate(w, exact) == evaluate(w, [float(x) for x in exact])

    @pytest.mark.core
    @pytest.mark.unit
    def test_literal_convention(self):
        """Test evaluation reads literal weights through normalization"""
        literal = WllocInstance.from_triples(3, [(0, 2, 1, 8)], convention=RetractionConvention.LITERAL)

        assert evaluate(literal, [0.0, 0.1, 0.9]) == 0
        assert evaluate(literal, [0.0, 0.9, 0.1]) == 8

    @pytest.mark.core
    @pytest.mark.unit
    def test_length_mismatch(self, calibration_wlloc):
        """Test position vectors must have b entries"""
        with pytest.raises(LengthMismatch):
            evaluate(calibration_wlloc, [0.0, 1.0])


class TestRetraction:

    @pytest.mark.core
    @pytest.mark.unit
    def test_six_points(self, six_points):
        """Test bucket {0,1} sees bucket {2,3} as closer than {4,5} in all 8 triples"""
        w = retraction(six_points, SIX_BUCKETS)

        assert w.b == 3
        assert w.weight(0, 1, 2) == 8
        assert w.weight(0, 2, 1) == 0

    @pytest.mark.core
    @pytest.mark.unit
    def test_matches_triple_count(self, planted_factory):
        """Test retraction weights equal direct triple counts"""
        inst, _ = planted_factory(9, seed=7)
        buckets = [[0, 4], [1, 2, 8], [3], [5, 6, 7]]
        w = retraction(inst, buckets)

        bucket_of = {x: j for j, bucket in enumerate(buckets) for x in bucket}
        expected = np.zeros((4, 4, 4), dtype=np.int64)
        for u, v, x in inst.triples():
            cell = (bucket_of[u], bucket_of[v], bucket_of[x])
            if len(set(cell)) == 3:
                expected[cell] += 1
        assert np.array_equal(w.weights, expected)

    @pytest.mark.core
    @pytest.mark.unit
    def test_singletons_are_the_instance(self, three_points):
        """Test singleton buckets give the unit-weight instance"""
        w = retraction(three_points, [[0], [1], [2]])

        assert w.nonzero() == [(0, 1, 2, 1), (1, 0, 2, 1), (2, 1, 0, 1)]

    @pytest.mark.core
    @pytest.mark.unit
    def test_literal_convention(self, six_points):
        """Test the literal convention stores the transposed weights"""
        w = retraction(six_points, SIX_BUCKETS, convention=RetractionConvention.LITERAL)

        assert w.weight(0, 2, 1) == 8
        assert w.normalized() == retraction(six_points, SIX_BUCKETS)

    @pytest.mark.core
    @pytest.mark.unit
    def test_rejects_bad_partition(self, six_points):
        """Test buckets must partition the points"""
        with pytest.raises(InvalidPartition):
            retraction(six_points, [[0, 1], [2, 3], [4]])

    @pytest.mark.core
    @pytest.mark.unit
    def test_representative(self, six_points):
        """Test representatives come one per bucket and give unit weights"""
        w, reps = representative_retraction(six_points, SIX_BUCKETS, seed=3)

        assert len(reps) == 3
        for rep, bucket in zip(reps, SIX_BUCKETS):
            assert rep in bucket
        assert w.weight(0, 1, 2) == 1
        assert w.total_weight == 3
        assert representative_retraction(six_points, SIX_BUCKETS, seed=3) == (w, reps)


class TestHeuristic:

    @pytest.mark.core
    @pytest.mark.unit
    def test_single_constraint_solved(self):
        """Test one constraint is satisfied after a single restart"""
        w = WllocInstance.from_triples(4, [(2, 0, 3, 6)])
        solution = solve_heuristic(w, restarts=1, seed=0)

        assert solution.violated_weight == 0
        assert solution.exact is False
        assert evaluate(w, list(solution.positions)) == 0

    @pytest.mark.core
    @pytest.mark.unit
    def test_calibration_optimum(self, calibration_wlloc):
        """Test restarts find the optimum 4 of the calibration instance"""
        hits = sum(
            solve_heuristic(calibration_wlloc, restarts=20, seed=seed).violated_weight == 4
            for seed in range(30)
        )
        assert hits >= 29

    @pytest.mark.core
    @pytest.mark.unit
    def test_never_worse_than_start(self):
        """Test descent never ends above its first random start"""
        w = random_wlloc(8, 5)
        for seed in range(5):
            start = make_rng(seed).random(8)
            solution = solve_heuristic(w, restarts=3, seed=seed)
            assert solution.violated_weight <= evaluate(w, list(start))
            assert solution.violated_weight == evaluate(w, list(solution.positions))
            assert all(0.0 <= x <= 1.0 for x in solution.positions)

    @pytest.mark.core
    @pytest.mark.unit
    def test_planted_retraction(self, aligned_instance_factory):
        """Test cluster-aligned retractions at b = 5 and b = 8 are placed without violations"""
        for clusters, total in ((5, 810), (8, 4536)):
            for seed in range(20):
                inst, _ = aligned_instance_factory(3, seed=seed, clusters=clusters)
                buckets = [list(range(3 * j, 3 * j + 3)) for j in range(clusters)]
                w = retraction(inst, buckets)

                assert w.total_weight == total
                assert solve_heuristic(w, restarts=20, seed=seed).violated_weight == 0

    @pytest.mark.core
    @pytest.mark.unit
    def test_deterministic(self):
        """Test equal seeds give equal solutions"""
        w = random_wlloc(6, 1)
        assert solve_heuristic(w, restarts=4, seed=9) == solve_heuristic(w, restarts=4, seed=9)
        with pytest.raises(ValueError):
            solve_heuristic(w, restarts=0, seed=9)
