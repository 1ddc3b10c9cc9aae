"""
Unit tests for the Front container and the nondominance / crowding filters
"""

import numpy as np
import pytest

from paretosqp.scripts.utilities.pareto_front import (
    Front,
    crowding_filter,
    crowding_values,
    nondominated_filter,
    truncate_by_crowding,
    unique_rows,
)


def _brute_force_nondominated(points):
    points = np.asarray(points)
    keep = []
    for i, p in enumerate(points):
        weakly_better = np.all(points <= p, axis=1)
        dominated = weakly_better & np.any(points < p, axis=1)
        earlier_copy = np.all(points[:i] == p, axis=1)
        if not dominated.any() and not earlier_copy.any():
            keep.append(i)
    return keep


class TestFront:
    """Test suite for the Front dataclass"""

    def test_defaults(self):
        """Test converged and criticality defaults"""
        front = Front(np.zeros((3, 2)), np.ones((3, 2)), "zdt1")
        assert len(front) == 3
        assert (front.n, front.m) == (2, 2)
        assert front.converged_count == 0
        assert np.all(np.isnan(front.criticality))

    def test_objectives_only(self):
        """Test fronts without decision data get zero decision columns"""
        front = Front(np.zeros((0,)), [[1.0, 2.0], [2.0, 1.0]], "external")
        assert front.decisions.shape == (2, 0)
        assert front.n == 0

    def test_row_mismatch(self):
        """Test decision and objective rows must agree"""
        with pytest.raises(ValueError):
            Front(np.zeros((2, 2)), np.ones((3, 2)), "zdt1")

    def test_subset_keeps_flags(self):
        """Test subset carries converged, criticality and sign"""
        front = Front(
            np.arange(6.0).reshape(3, 2),
            np.arange(6.0).reshape(3, 2),
            "mop3",
            converged=[True, False, True],
            criticality=[0.1, np.nan, 0.3],
            objective_sign=-1.0,
        )
        sub = front.subset([0, 2])
        assert sub.converged_count == 2
        assert np.allclose(sub.criticality, [0.1, 0.3])
        assert sub.objective_sign == -1.0
        assert np.allclose(sub.native_objectives(), -sub.objectives)

    def test_concat(self):
        """Test concatenation stacks rows and rejects mixed objective counts"""
        a = Front(np.zeros((1, 2)), [[1.0, 2.0]], "a")
        b = Front(np.zeros((2, 3)), [[2.0, 1.0], [3.0, 0.0]], "b")
        merged = Front.concat([a, b], problem_name="union")
        assert len(merged) == 3
        assert merged.n == 0
        assert merged.problem_name == "union"

        with pytest.raises(ValueError):
            Front.concat([a, Front(np.zeros((1, 2)), [[1.0, 2.0, 3.0]], "c")])
        with pytest.raises(ValueError):
            Front.concat([])


class TestNondominatedFilter:
    """Test suite for nondominated_filter"""

    def test_small_example(self):
        """Test (2, 2) is dominated by both other points"""
        assert list(nondominated_filter([[1.0, 2.0], [2.0, 1.0], [2.0, 2.0]])) == [0, 1]

    def test_singleton(self):
        """Test a single point is nondominated"""
        assert list(nondominated_filter([[0.0, 0.0]])) == [0]

    def test_empty(self):
        """Test an empty input gives no indices"""
        assert nondominated_filter(np.zeros((0, 2))).size == 0

    def test_duplicates_keep_lowest_index(self):
        """Test exact duplicates collapse to their first occurrence"""
        points = [[1.0, 1.0], [0.0, 2.0], [1.0, 1.0], [0.0, 2.0]]
        assert list(nondominated_filter(points)) == [0, 1]
        three = [[1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [0.0, 2.0, 2.0]]
        assert list(nondominated_filter(three)) == [0, 2]

    def test_weak_dominance_on_equal_first_objective(self):
        """Test equal f1 with larger f2 is dominated"""
        assert list(nondominated_filter([[1.0, 3.0], [1.0, 2.0]])) == [1]

    @pytest.mark.parametrize("m", [2, 3])
    def test_matches_brute_force(self, rng, m):
        """Test 200 random sets of 100 vectors against the pairwise oracle"""
        for _ in range(200):
            points = rng.random((100, m))
            points[::7] = np.round(points[::7], 1)
            assert list(nondominated_filter(points)) == _brute_force_nondominated(points)

    def test_fixed_point(self, rng):
        """Test filtering a filtered set changes nothing"""
        points = rng.random((60, 2))
        keep = nondominated_filter(points)
        assert list(nondominated_filter(points[keep])) == list(range(len(keep)))

    def test_accepts_front(self):
        """Test a Front can be passed directly"""
        front = Front(np.zeros((2, 1)), [[1.0, 2.0], [2.0, 3.0]], "p")
        assert list(nondominated_filter(front)) == [0]


class TestCrowding:
    """Test suite for crowding_values, crowding_filter and truncate_by_crowding"""

    def test_two_points_are_boundaries(self):
        """Test both points of a pair get +inf"""
        assert np.all(np.isinf(crowding_values([[0.0, 1.0], [1.0, 0.0]])))

    def test_collinear_middle_point(self):
        """Test the middle of three equally spaced points scores 1 + 1"""
        values = crowding_values([[0.0, 1.0], [0.5, 0.5], [1.0, 0.0]])
        assert np.isinf(values[0]) and np.isinf(values[2])
        assert values[1] == pytest.approx(2.0)

    def test_degenerate_objective_contributes_nothing(self):
        """Test a constant objective adds zero"""
        values = crowding_values([[0.0, 5.0], [0.5, 5.0], [1.0, 5.0]])
        assert values[1] == pytest.approx(1.0)

    def test_empty_front_rejected(self):
        """Test crowding of an empty set raises"""
        with pytest.raises(ValueError):
            crowding_values(np.zeros((0, 2)))

    def test_filter_threshold(self):
        """Test c below the smallest finite value keeps every point"""
        points = np.column_stack([np.linspace(0, 1, 6), 1 - np.linspace(0, 1, 6)])
        finite = crowding_values(points)
        smallest = finite[np.isfinite(finite)].min()
        assert list(crowding_filter(points, smallest - 1e-9)) == list(range(6))
        assert list(crowding_filter(points, 1.0)) == [0, 5]
        assert crowding_filter(np.zeros((0, 2)), 0.1).size == 0

    def test_truncate_keeps_most_isolated(self):
        """Test top-q truncation keeps boundaries, then the widest gaps"""
        points = [[0.0, 1.0], [0.1, 0.9], [0.2, 0.8], [0.6, 0.4], [1.0, 0.0]]
        assert list(truncate_by_crowding(points, 3)) == [0, 3, 4]
        assert list(truncate_by_crowding(points, None)) == [0, 1, 2, 3, 4]
        assert list(truncate_by_crowding(points, 10)) == [0, 1, 2, 3, 4]

    def test_truncate_ties_by_index(self):
        """Test equal crowding keeps the lower index"""
        points = np.column_stack([np.linspace(0, 1, 5), 1 - np.linspace(0, 1, 5)])
        assert list(truncate_by_crowding(points, 3)) == [0, 1, 4]

    def test_truncate_rejects_nonpositive_q(self):
        """Test q < 1 raises"""
        with pytest.raises(ValueError):
            truncate_by_crowding([[0.0, 1.0], [1.0, 0.0]], 0)


def test_unique_rows():
    """Test first occurrences are returned in ascending order"""
    values = np.array([[1.0, 2.0], [0.0, 0.0], [1.0, 2.0], [3.0, 1.0], [0.0, 0.0]])
    assert list(unique_rows(values)) == [0, 1, 3]
    assert unique_rows(np.zeros((0, 2))).size == 0
