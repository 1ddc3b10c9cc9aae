"""
Unit tests for the smoothed low-order penalty merit function
"""

import numpy as np
import pytest

from paretosqp.scripts.utilities.penalty import (
    PenaltyState,
    exact_penalty_value,
    fallback_direction,
    max_violation,
    penalty_gradient,
    penalty_value,
    violation_combination,
)
from paretosqp.scripts.utilities.problems import (
    Problem,
    ProblemDimensionError,
    make_problem1,
    make_zdt1,
    make_zdt2,
    make_mop3,
)
from paretosqp.scripts.utilities.smoothing import SmoothingConfig


@pytest.fixture
def line_problem():
    """f1 = x^2, f2 = (x - 1)^2 subject to x - 2 <= 0"""
    return Problem(
        name="line",
        n=1,
        m=2,
        a=1,
        objectives=lambda x: np.array([x[0] ** 2, (x[0] - 1.0) ** 2]),
        constraints=lambda x: np.array([x[0] - 2.0]),
        objective_jacobian=lambda x: np.array([[2.0 * x[0]], [2.0 * (x[0] - 1.0)]]),
        constraint_jacobian=lambda x: np.array([[1.0]]),
    )


@pytest.fixture
def unconstrained_plane():
    """f1 = x1, f2 = x2^2 with no constraints"""
    return Problem(
        name="plane",
        n=2,
        m=2,
        a=0,
        objectives=lambda x: np.array([x[0], x[1] ** 2]),
        constraints=lambda x: np.zeros(0),
        objective_jacobian=lambda x: np.array([[1.0, 0.0], [0.0, 2.0 * x[1]]]),
        constraint_jacobian=lambda x: np.zeros((0, 2)),
    )


def _state(x_hat, eps=0.01, pi=1.0, k=0.5, b=4.0):
    return PenaltyState(SmoothingConfig(k, b, eps), pi, np.asarray(x_hat, dtype=float))


def _sample(problem, rng, count):
    """Random points in the problem box, keeping ZDT away from the sqrt singularity"""
    lower = problem.lower.copy()
    if problem.name == "zdt1":
        lower[0] = 0.05
    return rng.uniform(lower, problem.upper, size=(count, problem.n))


class TestPenaltyState:
    """Test suite for PenaltyState validation"""

    def test_rejects_nonpositive_pi(self):
        """Test that pi must be positive"""
        with pytest.raises(ValueError):
            _state([0.0], pi=0.0)

    def test_rejects_high_order_kernel(self):
        """Test that k > 1 is refused for the merit"""
        with pytest.raises(ValueError):
            _state([0.0], k=1.5)

    def test_rejects_non_differentiable_kernel(self):
        """Test that 1/b >= k is refused for the merit"""
        with pytest.raises(ValueError):
            _state([0.0], k=0.5, b=2.0)

    def test_reference_dimension_checked(self, problem1):
        """Test that x_hat must match the problem dimension"""
        with pytest.raises(ProblemDimensionError):
            penalty_value(problem1, np.zeros(2), _state([0.0, 0.0, 0.0]))

    def test_reference_objectives_cached(self, problem1):
        """Test that F(x_hat) is evaluated once and reused"""
        st = _state([0.0, 0.0])
        first = st.reference_objectives(problem1)
        assert np.allclose(first, [1.0, 1.0])
        assert st.reference_objectives(problem1) is first

    def test_with_eps_and_pi(self):
        """Test the copy helpers keep the reference point"""
        st = _state([0.3], eps=0.1, pi=2.0)
        assert st.with_eps(0.05).eps == 0.05
        assert st.with_pi(5.0).pi == 5.0
        assert np.array_equal(st.with_pi(5.0).x_hat, st.x_hat)


class TestPenaltyValue:
    """Test suite for penalty_value"""

    def test_line_example(self, line_problem):
        """Test the one-dimensional value 1.0 + 0 + (0.05 + 0.05)"""
        assert penalty_value(line_problem, np.array([0.0]), _state([0.0])) == pytest.approx(1.1)

    def test_small_eps_limit(self, line_problem):
        """Test the value tends to sum f at x = x_hat strictly feasible"""
        value = penalty_value(line_problem, np.array([0.0]), _state([0.0], eps=1e-12))
        assert value == pytest.approx(1.0, abs=1e-5)

    def test_bound_terms_only(self, problem1):
        """Test the branch bookkeeping sum f + pi m eps^k b^-k"""
        x = np.array([0.1, 0.2])
        st = _state(x, eps=0.01, pi=3.0)
        expected = float(np.sum(problem1.f(x))) + 3.0 * 2 * 0.01**0.5 * 4.0**-0.5
        assert penalty_value(problem1, x, st) == pytest.approx(expected, rel=1e-12)

    def test_dimension_mismatch(self, problem1):
        """Test that a wrong-length x raises an invalid-argument error"""
        with pytest.raises(ValueError):
            penalty_value(problem1, np.zeros(3), _state([0.0, 0.0]))

    def test_majorizes_unsmoothed_penalty(self, problem1, rng):
        """Test the smoothed merit lies above the exact low-order merit"""
        x_hat = np.array([0.2, -0.1])
        for x in _sample(problem1, rng, 50):
            for eps in (1e-1, 1e-3):
                st = _state(x_hat, eps=eps, pi=10.0)
                assert penalty_value(problem1, x, st) >= exact_penalty_value(problem1, x, st)

    def test_monotone_in_eps(self, problem1, rng):
        """Test smaller eps never increases the merit"""
        x_hat = np.array([0.2, -0.1])
        for x in _sample(problem1, rng, 50):
            values = [
                penalty_value(problem1, x, _state(x_hat, eps=eps, pi=10.0))
                for eps in (1e-4, 1e-3, 1e-2, 1e-1)
            ]
            assert all(lo <= hi + 1e-10 for lo, hi in zip(values, values[1:]))

    def test_converges_to_unsmoothed_penalty(self, problem1, rng):
        """Test the gap to the exact merit shrinks monotonically to zero"""
        x_hat = np.array([0.2, -0.1])
        for x in _sample(problem1, rng, 20):
            gaps = []
            for p in range(1, 10):
                st = _state(x_hat, eps=10.0**-p, pi=10.0)
                gaps.append(penalty_value(problem1, x, st) - exact_penalty_value(problem1, x, st))
            assert all(small <= large + 1e-10 for large, small in zip(gaps, gaps[1:]))
            assert gaps[-1] < 1e-2


class TestPenaltyGradient:
    """Test suite for penalty_gradient"""

    def test_line_example(self, line_problem, finite_difference):
        """Test the one-dimensional gradient against its closed form and differences"""
        st = _state([0.0])
        grad = penalty_gradient(line_problem, np.array([0.0]), st)
        # sum f' = -2 plus pi * h'(0) * (0 - 2) with h'(0) = k (eps/b)^(k-1) = 10
        assert grad[0] == pytest.approx(-22.0, rel=1e-12)

        fd = finite_difference(lambda x: penalty_value(line_problem, x, st), np.array([0.0]), 1e-7)
        assert grad[0] == pytest.approx(fd[0], rel=1e-4)

    def test_interior_point_reduces_to_objective_sum(self, problem1):
        """Test all kernel terms vanish when every residual is below -eps"""
        x = np.array([0.5, 0.25])
        st = _state([-0.5, -0.5], eps=0.01, pi=7.0)
        expected = problem1.jac_f(x).sum(axis=0)
        assert np.allclose(penalty_gradient(problem1, x, st), expected, rtol=0, atol=1e-14)

    def test_problem1_random_point(self, problem1, finite_difference):
        """Test the gradient on Problem1 with k=0.5, b=4, eps=0.1, pi=10"""
        x = np.array([0.3, -0.2])
        st = _state([0.0, 0.1], eps=0.1, pi=10.0)
        grad = penalty_gradient(problem1, x, st)
        fd = finite_difference(lambda y: penalty_value(problem1, y, st), x, 1e-7)
        assert np.linalg.norm(grad - fd) <= 1e-5 * max(1.0, np.linalg.norm(grad))

    @pytest.mark.parametrize(
        "factory", [make_problem1, lambda: make_zdt1(5), lambda: make_zdt2(5), make_mop3]
    )
    def test_matches_finite_differences(self, factory, rng, finite_difference):
        """Test the gradient at 100 random points per benchmark"""
        problem = factory()
        eps = 0.1
        points = _sample(problem, rng, 100)
        references = _sample(problem, rng, 100)
        checked = 0
        for x, x_hat in zip(points, references):
            st = _state(x_hat, eps=eps, pi=10.0)
            residuals = np.concatenate([problem.g(x), problem.f(x) - problem.f(x_hat)])
            # Stay clear of the kernel breakpoints at 0 and -eps
            if np.min(np.minimum(np.abs(residuals), np.abs(residuals + eps))) < 1e-2:
                continue
            grad = penalty_gradient(problem, x, st)
            fd = finite_difference(lambda y: penalty_value(problem, y, st), x, 1e-7)
            assert np.linalg.norm(grad - fd) <= 1e-5 * max(1.0, np.linalg.norm(grad))
            checked += 1
        assert checked >= 20


class TestFallbackDirection:
    """Test suite for fallback_direction"""

    def test_negates_gradient(self, problem1, rng):
        """Test fallback + gradient = 0"""
        st = _state([0.1, 0.1], eps=0.1, pi=5.0)
        for x in _sample(problem1, rng, 10):
            total = fallback_direction(problem1, x, st) + penalty_gradient(problem1, x, st)
            assert np.allclose(total, 0.0)

    def test_zero_at_stationary_interior_point(self):
        """Test a zero direction where sum grad f vanishes and no term is active"""
        problem = Problem(
            name="bowl",
            n=1,
            m=2,
            a=0,
            objectives=lambda x: np.array([x[0] ** 2, x[0] ** 2]),
            constraints=lambda x: np.zeros(0),
            objective_jacobian=lambda x: np.array([[2.0 * x[0]], [2.0 * x[0]]]),
            constraint_jacobian=lambda x: np.zeros((0, 1)),
        )
        st = _state([1.0], eps=0.01)
        assert np.allclose(fallback_direction(problem, np.array([0.0]), st), 0.0)

    def test_descends_on_violation(self, problem1):
        """Test the direction opposes the violated-constraint combination"""
        x = np.array([1.0, 1.0])
        st = _state([0.0, 0.0], eps=0.01, pi=100.0)
        combo = violation_combination(problem1, x, st)
        assert float(fallback_direction(problem1, x, st) @ combo) < 0


class TestViolationCombination:
    """Test suite for violation_combination and max_violation"""

    def test_zero_when_nothing_violated(self, problem1):
        """Test the empty sums give the zero vector"""
        x = np.array([0.5, 0.25])
        st = _state([-0.5, -0.5])
        assert np.array_equal(violation_combination(problem1, x, st), np.zeros(2))
        assert max_violation(problem1, x, st) == 0.0

    def test_problem1_violated_constraint(self, problem1):
        """Test d2 = k (g + eps/b)^(k-1) at x = (1, 1)"""
        x = np.array([1.0, 1.0])
        st = _state([0.0, 0.0], eps=0.01)
        d2 = 0.5 * 1.5025**-0.5
        assert d2 == pytest.approx(0.40784, rel=1e-3)
        assert np.allclose(violation_combination(problem1, x, st), d2 * np.array([2.0, 2.0]))
        assert max_violation(problem1, x, st) == pytest.approx(1.5)

    def test_single_violated_bound(self, unconstrained_plane):
        """Test one violated objective bound with gradient e1 gives d3 e1"""
        x = np.array([0.5, 0.3])
        st = _state([0.2, 0.3], eps=0.01)
        d3 = 0.5 * (0.3 + 0.0025) ** -0.5
        assert np.allclose(violation_combination(unconstrained_plane, x, st), [d3, 0.0])
        assert max_violation(unconstrained_plane, x, st) == pytest.approx(0.3)
