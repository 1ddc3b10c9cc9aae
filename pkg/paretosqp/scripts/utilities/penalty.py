"""
Low-order smooth penalty merit function for the Pareto stage

For a reference point x_hat the merit is

    P(x, pi) = sum f_i(x) + pi * sum h(g_i(x)) + pi * sum h(f_i(x) - f_i(x_hat))

with h the smoothed kernel from smoothing.py. One shared weight pi scales both
the constraint terms and the objective-bound terms.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .problems import Problem, ProblemDimensionError
from .smoothing import SmoothingConfig, h_plus, smooth_h, smooth_h_deriv

logger = logging.getLogger(__name__)


@dataclass
class PenaltyState:
    """Merit parameters in force at a stage-2 iterate

    f_hat caches F(x_hat); it is computed on first use when omitted.
    """

    smoothing: SmoothingConfig
    pi: float
    x_hat: np.ndarray
    f_hat: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.pi > 0:
            raise ValueError(f"Penalty weight pi must be positive, got {self.pi}")
        self.smoothing.require_low_order()
        self.x_hat = np.asarray(self.x_hat, dtype=float)
        if self.f_hat is not None:
            self.f_hat = np.asarray(self.f_hat, dtype=float)

    @property
    def eps(self) -> float:
        return self.smoothing.eps

    def reference_objectives(self, problem: Problem) -> np.ndarray:
        if self.x_hat.shape != (problem.n,):
            raise ProblemDimensionError(
                f"Reference point has shape {self.x_hat.shape}, expected ({problem.n},)"
            )
        if self.f_hat is None:
            self.f_hat = problem.f(self.x_hat)
        return self.f_hat

    def with_eps(self, eps: float) -> "PenaltyState":
        return PenaltyState(self.smoothing.with_eps(eps), self.pi, self.x_hat, self.f_hat)

    def with_pi(self, pi: float) -> "PenaltyState":
        return PenaltyState(self.smoothing, pi, self.x_hat, self.f_hat)


def _residuals(problem: Problem, x, st: PenaltyState):
    f = problem.f(x)
    g = problem.g(x)
    return f, g, f - st.reference_objectives(problem)


def penalty_value(problem: Problem, x, st: PenaltyState) -> float:
    """Smoothed merit value at x"""
    f, g, bound = _residuals(problem, x, st)
    total = float(np.sum(f))
    if g.size:
        total += st.pi * float(np.sum(smooth_h(g, st.smoothing)))
    total += st.pi * float(np.sum(smooth_h(bound, st.smoothing)))
    return total


def exact_penalty_value(problem: Problem, x, st: PenaltyState) -> float:
    """Unsmoothed merit using max(0, t)^k; the eps -> 0 limit of penalty_value"""
    f, g, bound = _residuals(problem, x, st)
    k = st.smoothing.k
    total = float(np.sum(f))
    if g.size:
        total += st.pi * float(np.sum(h_plus(g, k)))
    total += st.pi * float(np.sum(h_plus(bound, k)))
    return total


def penalty_gradient(problem: Problem, x, st: PenaltyState) -> np.ndarray:
    """Exact gradient of penalty_value by the chain rule"""
    _, g, bound = _residuals(problem, x, st)
    jac_f = problem.jac_f(x)
    grad = jac_f.sum(axis=0)
    if g.size:
        grad = grad + st.pi * problem.jac_g(x).T @ smooth_h_deriv(g, st.smoothing)
    grad = grad + st.pi * jac_f.T @ smooth_h_deriv(bound, st.smoothing)
    return grad


def fallback_direction(problem: Problem, x, st: PenaltyState) -> np.ndarray:
    """Steepest-descent direction on the merit, used when QP2 is infeasible"""
    return -penalty_gradient(problem, x, st)


def violation_combination(problem: Problem, x, st: PenaltyState) -> np.ndarray:
    """Weighted sum of gradients over violated constraints and objective bounds

    Weights are k * (t + eps/b)^(k-1) evaluated at each violated residual t.
    Returns the zero vector when nothing is violated.
    """
    _, g, bound = _residuals(problem, x, st)
    k, b, eps = st.smoothing.k, st.smoothing.b, st.smoothing.eps
    combo = np.zeros(problem.n)

    violated_g = g > 0
    if np.any(violated_g):
        d2 = k * (g[violated_g] + eps / b) ** (k - 1.0)
        combo += problem.jac_g(x)[violated_g].T @ d2

    violated_f = bound > 0
    if np.any(violated_f):
        d3 = k * (bound[violated_f] + eps / b) ** (k - 1.0)
        combo += problem.jac_f(x)[violated_f].T @ d3

    return combo


def max_violation(problem: Problem, x, st: PenaltyState) -> float:
    """Largest positive residual over constraints and objective bounds, 0 if none"""
    _, g, bound = _residuals(problem, x, st)
    worst = max(float(g.max()) if g.size else 0.0, float(bound.max()))
    return max(worst, 0.0)
