"""
Dense convex QP solver and the two subproblem builders

Solves

    min 0.5 d^T B d + c^T d   s.t.  G d + h <= 0

with a primal active-set method started from a feasible point. A phase-1
linear program finds the starting point and detects infeasibility.

Usage:
    data = build_stage2_qp(problem, x, x_hat, B)
    sol = solve_qp(data)
    if sol.is_optimal:
        step = sol.direction
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from scipy import linalg
from scipy.optimize import linprog

from .constants import QP_ITERATION_FACTOR, QP_KKT_TOL, QP_RANK_TOL
from .problems import Problem, ProblemDimensionError

logger = logging.getLogger(__name__)

STATUS_OPTIMAL = "optimal"
STATUS_INFEASIBLE = "infeasible"

# Constraints within this distance of zero start in the working set
ACTIVE_TOL = 1e-12


class QPInputError(ValueError):
    """Raised for malformed QP data or a Hessian that is not positive definite"""

    pass


class QPNumericalError(Exception):
    """Raised when the active-set loop or the phase-1 LP fails to finish"""

    pass


@dataclass(frozen=True)
class QPData:
    """min 0.5 d^T B d + c^T d subject to G d + h <= 0"""

    hessian: np.ndarray
    linear: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray

    def __post_init__(self):
        hessian = np.atleast_2d(np.asarray(self.hessian, dtype=float))
        linear = np.asarray(self.linear, dtype=float).reshape(-1)
        n = linear.size
        offsets = np.asarray(self.offsets, dtype=float).reshape(-1)
        normals = np.asarray(self.normals, dtype=float).reshape(offsets.size, n)

        if hessian.shape != (n, n):
            raise QPInputError(f"Hessian has shape {hessian.shape}, expected ({n}, {n})")
        if not np.all(np.isfinite(hessian)) or not np.all(np.isfinite(linear)):
            raise QPInputError("QP data contains non-finite values")

        # Frozen dataclass: normalised arrays are written through object.__setattr__
        object.__setattr__(self, "hessian", hessian)
        object.__setattr__(self, "linear", linear)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)

    @property
    def n(self) -> int:
        return self.linear.size

    @property
    def r(self) -> int:
        return self.offsets.size

    def objective(self, d: np.ndarray) -> float:
        return float(0.5 * d @ self.hessian @ d + self.linear @ d)

    def constraint_values(self, d: np.ndarray) -> np.ndarray:
        return self.normals @ d + self.offsets


@dataclass
class QPSolution:
    """Direction, full-length multiplier vector and solve status"""

    direction: np.ndarray
    multipliers: np.ndarray
    status: str
    phase1_violation: float = 0.0
    iterations: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == STATUS_OPTIMAL

    def kkt_residuals(self, data: QPData) -> Dict[str, float]:
        """Stationarity, primal feasibility and complementarity residuals"""
        values = data.constraint_values(self.direction)
        stationarity = (
            data.hessian @ self.direction + data.linear + data.normals.T @ self.multipliers
        )
        return {
            "stationarity": float(np.max(np.abs(stationarity), initial=0.0)),
            "feasibility": float(np.max(values, initial=0.0)),
            "complementarity": float(
                np.max(np.abs(self.multipliers * values), initial=0.0)
            ),
        }


def _check_hessian(hessian: np.ndarray):
    if not np.allclose(hessian, hessian.T, rtol=0.0, atol=1e-10):
        raise QPInputError("Hessian is not symmetric")
    try:
        linalg.cho_factor(hessian)
    except linalg.LinAlgError as e:
        raise QPInputError(f"Hessian is not positive definite: {e}") from e


def _phase1_start(data: QPData, tol: float):
    """Maximise the uniform slack t subject to G d + t <= -h and t <= 1

    Returns (start point, violation); violation > 0 means infeasible.
    """
    n, r = data.n, data.r
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([data.normals, np.ones((r, 1))])
    bounds = [(None, None)] * n + [(None, 1.0)]
    res = linprog(cost, A_ub=a_ub, b_ub=-data.offsets, bounds=bounds, method="highs")
    if res.status != 0:
        raise QPNumericalError(f"Phase-1 LP failed: {res.message}")
    slack = -float(res.fun)
    logger.debug(f"Phase-1 LP slack {slack:.3e}")
    if slack < -tol:
        return None, -slack
    return np.asarray(res.x[:n], dtype=float), 0.0


def _initial_working_set(normals: np.ndarray, values: np.ndarray) -> List[int]:
    working: List[int] = []
    for i in np.flatnonzero(np.abs(values) <= ACTIVE_TOL):
        candidate = working + [int(i)]
        if np.linalg.matrix_rank(normals[candidate], tol=QP_RANK_TOL) == len(candidate):
            working = candidate
    return working


def _solve_equality_qp(data: QPData, d: np.ndarray, working: List[int]):
    """Step p and multipliers for min over G_W p = 0 starting at d"""
    n = data.n
    gw = data.normals[working]
    w = len(working)
    kkt = np.block([[data.hessian, gw.T], [gw, np.zeros((w, w))]])
    rhs = np.concatenate([-(data.hessian @ d + data.linear), np.zeros(w)])
    sol = np.linalg.lstsq(kkt, rhs, rcond=QP_RANK_TOL)[0]
    return sol[:n], sol[n:]


def solve_qp(data: QPData, tol: float = QP_KKT_TOL) -> QPSolution:
    """Solve a dense strictly convex QP

    Args:
        data: QP to solve
        tol: Feasibility tolerance for the phase-1 test and the unconstrained shortcut

    Returns:
        QPSolution with status optimal or infeasible

    Raises:
        QPInputError: If the Hessian is not symmetric positive definite
        QPNumericalError: If the iteration cap is hit or the phase-1 LP fails
    """
    _check_hessian(data.hessian)
    n, r = data.n, data.r

    unconstrained = -linalg.cho_solve(linalg.cho_factor(data.hessian), data.linear)
    if r == 0 or np.all(data.constraint_values(unconstrained) <= tol):
        return QPSolution(unconstrained, np.zeros(r), STATUS_OPTIMAL)

    if np.all(data.offsets <= 0):
        d = np.zeros(n)
    else:
        d, violation = _phase1_start(data, tol)
        if d is None:
            logger.debug(f"QP infeasible, phase-1 violation {violation:.3e}")
            return QPSolution(
                np.zeros(n), np.zeros(r), STATUS_INFEASIBLE, phase1_violation=violation
            )

    working = _initial_working_set(data.normals, data.constraint_values(d))
    max_iterations = QP_ITERATION_FACTOR * (n + r)

    for iteration in range(1, max_iterations + 1):
        p, lam = _solve_equality_qp(data, d, working)

        if np.linalg.norm(p, np.inf) <= 1e-10 * (1.0 + np.linalg.norm(d, np.inf)):
            if not working or lam.min() >= -1e-12:
                multipliers = np.zeros(r)
                multipliers[working] = np.maximum(lam, 0.0)
                return QPSolution(
                    d + p, multipliers, STATUS_OPTIMAL, iterations=iteration
                )
            # argmin takes the first, i.e. lowest-index, most negative multiplier
            leaving = working[int(np.argmin(lam))]
            working.remove(leaving)
            continue

        step = 1.0
        blocking: Optional[int] = None
        rates = data.normals @ p
        slacks = np.maximum(-data.constraint_values(d), 0.0)
        for i in range(r):
            if i in working or rates[i] <= QP_RANK_TOL * np.linalg.norm(p):
                continue
            ratio = slacks[i] / rates[i]
            if ratio < step:
                step = ratio
                blocking = i

        d = d + step * p
        if blocking is not None:
            working = sorted(working + [blocking])

    raise QPNumericalError(
        f"Active-set QP did not finish within {max_iterations} iterations (n={n}, r={r})"
    )


# ============================================================================
# Subproblem builders
# ============================================================================


def build_spread_qp(
    problem: Problem, x, hessian: np.ndarray, objective_index: int
) -> QPData:
    """Single-objective subproblem: c = grad f_i(x), G = J_g(x), h = g(x)

    objective_index is 0-based.
    """
    if not 0 <= objective_index < problem.m:
        raise QPInputError(
            f"Objective index {objective_index} out of range for m={problem.m}"
        )
    x = problem.check_point(x)
    return QPData(
        hessian=hessian,
        linear=problem.jac_f(x)[objective_index],
        normals=problem.jac_g(x),
        offsets=problem.g(x),
    )


def build_stage2_qp(
    problem: Problem,
    x,
    x_hat,
    hessian: np.ndarray,
    f_hat: Optional[np.ndarray] = None,
) -> QPData:
    """Pareto-stage subproblem

    Rows are the m objective bounds grad f_i^T d + f_i(x) - f_i(x_hat) <= 0
    followed by the a linearised constraints.
    """
    if problem.m < 2:
        raise QPInputError(f"Stage-2 subproblem needs m >= 2, got m={problem.m}")
    x = problem.check_point(x)
    x_hat = np.asarray(x_hat, dtype=float)
    if x_hat.shape != (problem.n,):
        raise ProblemDimensionError(
            f"Reference point has shape {x_hat.shape}, expected ({problem.n},)"
        )
    if f_hat is None:
        f_hat = problem.f(x_hat)
    jac_f = problem.jac_f(x)
    return QPData(
        hessian=hessian,
        linear=jac_f.sum(axis=0),
        normals=np.vstack([jac_f, problem.jac_g(x)]),
        offsets=np.concatenate([problem.f(x) - f_hat, problem.g(x)]),
    )
