"""
Constrained multi-objective benchmark problems

A Problem bundles analytic evaluators for the objectives F(x) (minimised),
the inequality constraints g(x) <= 0 and both Jacobians. Box bounds are
encoded as ordinary inequality constraints so the QP subproblems see them
uniformly.

Benchmarks:
    problem1  Rosenbrock-type pair on the disc x1^2 + x2^2 <= 0.5
    zdt1      convex front f2 = 1 - sqrt(f1), n variables in [0, 1]
    zdt2      concave front f2 = 1 - f1^2, n variables in [0, 1]
    mop3      disconnected front, defined as a maximisation problem
"""

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from threading import Lock
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .constants import (
    DEFAULT_REFERENCE_RESOLUTION,
    DEFAULT_ZDT_DIMENSION,
    PROBLEM_NAMES,
)
from .pareto_front import Front, nondominated_filter

logger = logging.getLogger(__name__)

VectorFunction = Callable[[np.ndarray], np.ndarray]


class ProblemDimensionError(ValueError):
    """Raised when a decision vector does not match the problem dimension"""

    pass


class UnknownProblemError(ValueError):
    """Raised when a benchmark name cannot be resolved"""

    pass


@dataclass(frozen=True, eq=False)
class Problem:
    """A constrained multi-objective minimisation problem"""

    name: str
    n: int
    m: int
    a: int
    objectives: VectorFunction
    constraints: VectorFunction
    objective_jacobian: VectorFunction
    constraint_jacobian: VectorFunction
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    # -1.0 when the problem is defined as a maximisation and F stores -F_native
    objective_sign: float = 1.0

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"A multi-objective problem needs m >= 2, got m={self.m}")
        if self.n < 1:
            raise ValueError(f"Decision dimension must be positive, got n={self.n}")
        if self.a < 0:
            raise ValueError(f"Constraint count must be nonnegative, got a={self.a}")

    def check_point(self, x) -> np.ndarray:
        """Return x as a float vector of length n or raise ProblemDimensionError"""
        arr = np.asarray(x, dtype=float)
        if arr.shape != (self.n,):
            raise ProblemDimensionError(
                f"{self.name}: expected a decision vector of shape ({self.n},), "
                f"got {arr.shape}"
            )
        return arr

    def f(self, x) -> np.ndarray:
        return np.asarray(self.objectives(self.check_point(x)), dtype=float)

    def g(self, x) -> np.ndarray:
        return np.asarray(self.constraints(self.check_point(x)), dtype=float)

    def jac_f(self, x) -> np.ndarray:
        return np.asarray(self.objective_jacobian(self.check_point(x)), dtype=float)

    def jac_g(self, x) -> np.ndarray:
        jac = np.asarray(self.constraint_jacobian(self.check_point(x)), dtype=float)
        return jac.reshape(self.a, self.n)

    def max_violation(self, x) -> float:
        """Largest constraint value max_i g_i(x), or -inf without constraints"""
        values = self.g(x)
        return float(values.max()) if values.size else -math.inf

    def is_feasible(self, x, tol: float = 0.0) -> bool:
        return self.max_violation(x) <= tol

    def native_objectives(self, objectives: np.ndarray) -> np.ndarray:
        """Map stored (minimised) objective values to the sign the problem is defined in"""
        return self.objective_sign * np.asarray(objectives, dtype=float)


@dataclass
class ConstraintClassification:
    """Partition of constraint indices at a point"""

    active: List[int]
    violated: List[int]
    inactive: List[int]
    tolerance: float


def classify_constraints(
    problem: Problem, x, tol: float = 1e-8
) -> ConstraintClassification:
    """Split constraint indices into active, violated and inactive sets

    Args:
        problem: Problem to evaluate
        x: Decision vector
        tol: Activity tolerance, |g_i(x)| <= tol counts as active

    Returns:
        ConstraintClassification with 0-based index lists
    """
    if tol < 0:
        raise ValueError(f"Tolerance must be nonnegative, got {tol}")
    values = problem.g(x)
    active = [int(i) for i in np.flatnonzero(np.abs(values) <= tol)]
    violated = [int(i) for i in np.flatnonzero(values > tol)]
    inactive = [int(i) for i in np.flatnonzero(values < -tol)]
    return ConstraintClassification(active, violated, inactive, tol)


# ============================================================================
# Evaluation counting
# ============================================================================


@dataclass
class EvaluationCounter:
    """Thread-safe tally of evaluator calls"""

    objective_evaluations: int = 0
    constraint_evaluations: int = 0
    jacobian_evaluations: int = 0
    _lock: Lock = field(default_factory=Lock, repr=False, compare=False)

    def bump(self, kind: str):
        with self._lock:
            setattr(self, kind, getattr(self, kind) + 1)

    def as_dict(self) -> Dict[str, int]:
        with self._lock:
            return {
                "objective_evaluations": self.objective_evaluations,
                "constraint_evaluations": self.constraint_evaluations,
                "jacobian_evaluations": self.jacobian_evaluations,
            }


def with_counter(problem: Problem) -> Tuple[Problem, EvaluationCounter]:
    """Return a copy of problem whose evaluators update a shared counter"""
    counter = EvaluationCounter()

    def counted(func: VectorFunction, kind: str) -> VectorFunction:
        def wrapper(x):
            counter.bump(kind)
            return func(x)

        return wrapper

    counted_problem = dataclasses.replace(
        problem,
        objectives=counted(problem.objectives, "objective_evaluations"),
        constraints=counted(problem.constraints, "constraint_evaluations"),
        objective_jacobian=counted(problem.objective_jacobian, "jacobian_evaluations"),
        constraint_jacobian=counted(
            problem.constraint_jacobian, "jacobian_evaluations"
        ),
    )
    return counted_problem, counter


# ============================================================================
# Box constraints
# ============================================================================


def _box_constraints(lower: np.ndarray, upper: np.ndarray):
    """Encode lower <= x <= upper as [lower - x; x - upper] <= 0"""
    n = lower.size
    jac = np.vstack([-np.eye(n), np.eye(n)])

    def constraints(x):
        return np.concatenate([lower - x, x - upper])

    def constraint_jacobian(x):
        return jac.copy()

    return constraints, constraint_jacobian


# ============================================================================
# Benchmarks
# ============================================================================


def make_problem1() -> Problem:
    """Rosenbrock / quadratic pair on the disc x1^2 + x2^2 <= 0.5"""

    def objectives(x):
        x1, x2 = x
        f1 = (1.0 - x1) ** 2 + 100.0 * (x2 - x1**2) ** 2
        f2 = (x1 + x2 - 1.0) ** 2 + 10.0 * (x1 - x2) ** 2
        return np.array([f1, f2])

    def objective_jacobian(x):
        x1, x2 = x
        r = x2 - x1**2
        s = x1 + x2 - 1.0
        t = x1 - x2
        return np.array(
            [
                [-2.0 * (1.0 - x1) - 400.0 * x1 * r, 200.0 * r],
                [2.0 * s + 20.0 * t, 2.0 * s - 20.0 * t],
            ]
        )

    def constraints(x):
        return np.array([x[0] ** 2 + x[1] ** 2 - 0.5])

    def constraint_jacobian(x):
        return np.array([[2.0 * x[0], 2.0 * x[1]]])

    radius = math.sqrt(0.5)
    return Problem(
        name="problem1",
        n=2,
        m=2,
        a=1,
        objectives=objectives,
        constraints=constraints,
        objective_jacobian=objective_jacobian,
        constraint_jacobian=constraint_jacobian,
        lower=np.full(2, -radius),
        upper=np.full(2, radius),
    )


def _make_zdt(n: int, name: str, concave: bool) -> Problem:
    if n < 2:
        raise ValueError(f"{name} needs n >= 2, got n={n}")
    lower = np.zeros(n)
    upper = np.ones(n)
    scale = 9.0 / (n - 1)
    constraints, constraint_jacobian = _box_constraints(lower, upper)

    def g_func(x):
        return 1.0 + scale * np.sum(x[1:])

    def objectives(x):
        # Clamp at 0: line-search trials may leave the box by rounding error
        f1 = x[0]
        ratio = max(f1, 0.0) / g_func(x)
        f2 = 1.0 - ratio**2 if concave else 1.0 - math.sqrt(ratio)
        return np.array([f1, f2])

    def objective_jacobian(x):
        f1 = max(x[0], 0.0)
        g = g_func(x)
        jac = np.zeros((2, n))
        jac[0, 0] = 1.0
        if concave:
            jac[1, 0] = -2.0 * f1 / g**2
            jac[1, 1:] = 2.0 * f1**2 / g**3 * scale
        else:
            # d/dx1 sqrt(x1/g) is unbounded at x1 = 0
            f1_safe = max(f1, 1e-12)
            jac[1, 0] = -0.5 / math.sqrt(f1_safe * g)
            jac[1, 1:] = 0.5 * math.sqrt(f1) * g**-1.5 * scale
        return jac

    return Problem(
        name=name,
        n=n,
        m=2,
        a=2 * n,
        objectives=objectives,
        constraints=constraints,
        objective_jacobian=objective_jacobian,
        constraint_jacobian=constraint_jacobian,
        lower=lower,
        upper=upper,
    )


def make_zdt1(n: int = DEFAULT_ZDT_DIMENSION) -> Problem:
    """ZDT1 with f2 = 1 - sqrt(f1 / g)"""
    return _make_zdt(n, "zdt1", concave=False)


def make_zdt2(n: int = DEFAULT_ZDT_DIMENSION) -> Problem:
    """ZDT2 with f2 = 1 - (f1 / g)^2"""
    return _make_zdt(n, "zdt2", concave=True)


MOP3_A1 = math.sin(1) - 2 * math.cos(1) + math.sin(2) - 1.5 * math.cos(2)
MOP3_A2 = 1.5 * math.sin(1) - math.cos(1) + 2 * math.sin(2) - 0.5 * math.cos(2)


def make_mop3() -> Problem:
    """MOP3, stored as minimisation of the negated native objectives"""
    lower = np.full(2, -math.pi)
    upper = np.full(2, math.pi)
    constraints, constraint_jacobian = _box_constraints(lower, upper)

    def terms(x):
        x1, x2 = x
        b1 = math.sin(x1) - 2 * math.cos(x1) + math.sin(x2) - 1.5 * math.cos(x2)
        b2 = 1.5 * math.sin(x1) - math.cos(x1) + 2 * math.sin(x2) - 0.5 * math.cos(x2)
        return b1, b2

    def objectives(x):
        b1, b2 = terms(x)
        f1 = 1.0 + (MOP3_A1 - b1) ** 2 + (MOP3_A2 - b2) ** 2
        f2 = (x[0] + 3.0) ** 2 + (x[1] + 1.0) ** 2
        return np.array([f1, f2])

    def objective_jacobian(x):
        x1, x2 = x
        b1, b2 = terms(x)
        db1 = np.array(
            [math.cos(x1) + 2 * math.sin(x1), math.cos(x2) + 1.5 * math.sin(x2)]
        )
        db2 = np.array(
            [1.5 * math.cos(x1) + math.sin(x1), 2 * math.cos(x2) + 0.5 * math.sin(x2)]
        )
        grad_f1 = -2.0 * (MOP3_A1 - b1) * db1 - 2.0 * (MOP3_A2 - b2) * db2
        grad_f2 = np.array([2.0 * (x1 + 3.0), 2.0 * (x2 + 1.0)])
        return np.vstack([grad_f1, grad_f2])

    return Problem(
        name="mop3",
        n=2,
        m=2,
        a=4,
        objectives=objectives,
        constraints=constraints,
        objective_jacobian=objective_jacobian,
        constraint_jacobian=constraint_jacobian,
        lower=lower,
        upper=upper,
        objective_sign=-1.0,
    )


def get_problem(name: str, n: Optional[int] = None) -> Problem:
    """Resolve a benchmark by name

    Args:
        name: One of problem1, zdt1, zdt2, mop3 (case-insensitive)
        n: Decision dimension for the ZDT problems

    Raises:
        UnknownProblemError: If the name is not a known benchmark
    """
    key = name.lower().strip()
    if key == "problem1":
        return make_problem1()
    if key == "zdt1":
        return make_zdt1(n or DEFAULT_ZDT_DIMENSION)
    if key == "zdt2":
        return make_zdt2(n or DEFAULT_ZDT_DIMENSION)
    if key == "mop3":
        return make_mop3()
    raise UnknownProblemError(
        f"Unknown problem '{name}'. Available problems: {', '.join(PROBLEM_NAMES)}"
    )


# ============================================================================
# Reference fronts
# ============================================================================


def reference_front(
    problem_name: str,
    resolution: int = DEFAULT_REFERENCE_RESOLUTION,
    n: Optional[int] = None,
) -> Front:
    """Analytic or grid-based reference front for a benchmark

    ZDT fronts are sampled from the analytic Pareto set x = (t, 0, ..., 0).
    Problem1 and MOP3 fronts are approximations: the nondominated subset of a
    resolution x resolution grid over the feasible box.

    Args:
        problem_name: Benchmark name
        resolution: Grid points per axis, at least 2
        n: Decision dimension for the ZDT problems

    Returns:
        Front in minimisation sign
    """
    if resolution < 2:
        raise ValueError(f"Reference resolution must be at least 2, got {resolution}")
    problem = get_problem(problem_name, n)

    if problem.name in ("zdt1", "zdt2"):
        t = np.linspace(0.0, 1.0, resolution)
        decisions = np.zeros((resolution, problem.n))
        decisions[:, 0] = t
        f2 = 1.0 - np.sqrt(t) if problem.name == "zdt1" else 1.0 - t**2
        objectives = np.column_stack([t, f2])
        logger.debug(f"Analytic {problem.name} front with {resolution} points")
        return Front(decisions, objectives, problem.name)

    axes = [np.linspace(lo, hi, resolution) for lo, hi in zip(problem.lower, problem.upper)]
    grid = np.array(np.meshgrid(*axes, indexing="ij")).reshape(problem.n, -1).T
    feasible = np.array([problem.is_feasible(x) for x in grid])
    grid = grid[feasible]
    objectives = np.array([problem.f(x) for x in grid])
    keep = nondominated_filter(objectives)
    logger.debug(
        f"Grid reference for {problem.name}: {len(grid)} feasible of "
        f"{resolution ** problem.n} grid points, {len(keep)} nondominated"
    )
    return Front(
        grid[keep], objectives[keep], problem.name, objective_sign=problem.objective_sign
    )
