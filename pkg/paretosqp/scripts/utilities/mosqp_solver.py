"""
Two-stage multi-objective SQP driver

Stage 1 (spread_stage) pushes a feasible point set along every objective with
single-objective QP steps that stay inside the feasible region.

Stage 2 (pareto_stage) takes every spread point as its own reference x_hat and
drives it toward Pareto criticality with the joint QP2 subproblem, using the
low-order smooth penalty as merit function. When QP2 is infeasible the merit's
negative gradient is used instead.

Usage:
    cfg = SolverConfig(seed=7)
    starts = initialize_points(problem, cfg)
    spread = spread_stage(problem, starts, cfg)
    front = pareto_stage(problem, spread, cfg)
"""

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from .constants import (
    BFGS_CURVATURE_TOL,
    BFGS_MAX_CONDITION,
    DEFAULT_B_SHAPE,
    DEFAULT_BACKTRACK,
    DEFAULT_BOUND_TOL,
    DEFAULT_CRITICAL_TOL,
    DEFAULT_CROWDING_MIN,
    DEFAULT_D_TOL,
    DEFAULT_EPS0,
    DEFAULT_EPS_FLOOR,
    DEFAULT_FEAS_TOL,
    DEFAULT_K_EXP,
    DEFAULT_MAX_BACKTRACKS,
    DEFAULT_MAX_ITERS,
    DEFAULT_N_POINTS,
    DEFAULT_OUTPUT_FEAS_TOL,
    DEFAULT_PENALTY_GROWTH,
    DEFAULT_PI0,
    DEFAULT_SEED,
    DEFAULT_SIGMA,
    DEFAULT_SPREADS,
    DEFAULT_TOP_Q,
    MAX_EPS_SHRINKS,
    MAX_INIT_DRAWS,
    MAX_PENALTY_GROWTHS,
)
from .feature_flags import _flags
from .pareto_front import (
    Front,
    crowding_filter,
    nondominated_filter,
    truncate_by_crowding,
    unique_rows,
)
from .penalty import (
    PenaltyState,
    fallback_direction,
    max_violation,
    penalty_gradient,
    penalty_value,
    violation_combination,
)
from .problems import Problem
from .qp_solver import (
    QPInputError,
    QPNumericalError,
    build_spread_qp,
    build_stage2_qp,
    solve_qp,
)
from .smoothing import SmoothingConfig

logger = logging.getLogger(__name__)


class SolverConfigError(ValueError):
    """Raised when solver parameters are out of range or mistyped"""

    pass


class InitializationError(Exception):
    """Raised when rejection sampling cannot find enough feasible points"""

    pass


# ============================================================================
# Configuration
# ============================================================================


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of both solver stages

    Defaults are the standard benchmark settings
    (k=0.5, b=4, sigma=0.2, M=2, A=0.5, K=5).
    """

    sigma: float = DEFAULT_SIGMA
    backtrack: float = DEFAULT_BACKTRACK
    penalty_growth: float = DEFAULT_PENALTY_GROWTH
    spreads: int = DEFAULT_SPREADS
    n_points: int = DEFAULT_N_POINTS
    k_exp: float = DEFAULT_K_EXP
    b_shape: float = DEFAULT_B_SHAPE
    eps0: float = DEFAULT_EPS0
    pi0: float = DEFAULT_PI0
    crowding_min: float = DEFAULT_CROWDING_MIN
    d_tol: float = DEFAULT_D_TOL
    max_iters: int = DEFAULT_MAX_ITERS
    max_backtracks: int = DEFAULT_MAX_BACKTRACKS
    seed: int = DEFAULT_SEED
    feas_tol: float = DEFAULT_FEAS_TOL
    eps_floor: float = DEFAULT_EPS_FLOOR
    max_penalty_growths: int = MAX_PENALTY_GROWTHS
    max_eps_shrinks: int = MAX_EPS_SHRINKS
    top_q: Optional[int] = DEFAULT_TOP_Q
    output_feas_tol: float = DEFAULT_OUTPUT_FEAS_TOL
    critical_tol: float = DEFAULT_CRITICAL_TOL
    bound_tol: float = DEFAULT_BOUND_TOL

    def __post_init__(self):
        errors = []
        if not 0 < self.sigma < 1:
            errors.append(f"sigma must lie in (0, 1), got {self.sigma}")
        if not 0 < self.backtrack < 1:
            errors.append(f"backtrack must lie in (0, 1), got {self.backtrack}")
        if not self.penalty_growth > 1:
            errors.append(f"penalty_growth must exceed 1, got {self.penalty_growth}")
        if not self.b_shape > 0:
            errors.append(f"b_shape must be positive, got {self.b_shape}")
        elif not 1.0 / self.b_shape < self.k_exp < 1:
            errors.append(
                f"k_exp must satisfy 1/b < k < 1, got k={self.k_exp}, b={self.b_shape}"
            )
        if not self.eps0 > 0:
            errors.append(f"eps0 must be positive, got {self.eps0}")
        if not self.pi0 > 0:
            errors.append(f"pi0 must be positive, got {self.pi0}")
        if not 0 < self.eps_floor <= self.eps0:
            errors.append(f"eps_floor must lie in (0, eps0], got {self.eps_floor}")
        if self.spreads < 0:
            errors.append(f"spreads must be nonnegative, got {self.spreads}")
        if self.n_points < 1:
            errors.append(f"n_points must be at least 1, got {self.n_points}")
        if self.max_iters < 1:
            errors.append(f"max_iters must be at least 1, got {self.max_iters}")
        if self.max_backtracks < 0:
            errors.append(f"max_backtracks must be nonnegative, got {self.max_backtracks}")
        if self.crowding_min < 0:
            errors.append(f"crowding_min must be nonnegative, got {self.crowding_min}")
        if not self.d_tol > 0:
            errors.append(f"d_tol must be positive, got {self.d_tol}")
        if not self.critical_tol > 0:
            errors.append(f"critical_tol must be positive, got {self.critical_tol}")
        if self.feas_tol < 0 or self.output_feas_tol < 0 or self.bound_tol < 0:
            errors.append("feasibility tolerances must be nonnegative")
        if self.top_q is not None and self.top_q < 1:
            errors.append(f"top_q must be at least 1 or None, got {self.top_q}")
        if errors:
            raise SolverConfigError("Invalid solver configuration: " + "; ".join(errors))

    @classmethod
    def from_overrides(
        cls, overrides: Dict[str, Any], base: Optional["SolverConfig"] = None
    ) -> "SolverConfig":
        """Build a config from key-value overrides, coercing string values

        Raises:
            SolverConfigError: On unknown keys or values of the wrong type
        """
        base = base or cls()
        known = {f.name: f for f in dataclasses.fields(cls)}
        coerced = {}
        for key, value in overrides.items():
            name = key.replace("-", "_")
            if name not in known:
                raise SolverConfigError(
                    f"Unknown solver option '{key}'. Valid options: {', '.join(known)}"
                )
            coerced[name] = _coerce(name, value)
        return dataclasses.replace(base, **coerced)

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    def smoothing(self, eps: Optional[float] = None) -> SmoothingConfig:
        eps = self.eps0 if eps is None else eps
        return SmoothingConfig(k=self.k_exp, b=self.b_shape, eps=eps)


_INT_FIELDS = {
    "spreads",
    "n_points",
    "max_iters",
    "max_backtracks",
    "seed",
    "max_penalty_growths",
    "max_eps_shrinks",
    "top_q",
}


def _coerce(name: str, value: Any) -> Any:
    if name == "top_q" and (value is None or str(value).lower() in ("none", "null", "")):
        return None
    if isinstance(value, bool):
        raise SolverConfigError(f"Option '{name}' does not accept a boolean")
    try:
        if name in _INT_FIELDS:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        return float(value)
    except (TypeError, ValueError) as e:
        expected = "an integer" if name in _INT_FIELDS else "a number"
        raise SolverConfigError(
            f"Option '{name}' expects {expected}, got {value!r}"
        ) from e


@dataclass
class SolverState:
    """Mutable per-start-point state of the Pareto stage"""

    x: np.ndarray
    x_hat: np.ndarray
    f_hat: np.ndarray
    hessian: np.ndarray
    eps: float
    pi: float
    iterations: int = 0
    converged: bool = False
    abandoned: bool = False
    hessian_resets: int = 0
    multipliers: Optional[np.ndarray] = None
    accepted: List[np.ndarray] = field(default_factory=list)

    def penalty(self, cfg: SolverConfig) -> PenaltyState:
        return PenaltyState(cfg.smoothing(self.eps), self.pi, self.x_hat, self.f_hat)


# ============================================================================
# Initial points and line searches
# ============================================================================


def initialize_points(problem: Problem, cfg: SolverConfig) -> List[np.ndarray]:
    """Draw cfg.n_points feasible points uniformly within the problem bounds

    Raises:
        InitializationError: If MAX_INIT_DRAWS draws do not yield enough
            feasible points, or the problem has no sampling bounds
    """
    if problem.lower is None or problem.upper is None:
        raise InitializationError(f"{problem.name} has no sampling bounds")
    rng = np.random.default_rng(cfg.seed)
    points: List[np.ndarray] = []
    draws = 0
    while len(points) < cfg.n_points:
        if draws >= MAX_INIT_DRAWS:
            raise InitializationError(
                f"Only {len(points)} of {cfg.n_points} feasible points after "
                f"{draws} draws; {problem.name} is too tightly constrained for "
                f"rejection sampling"
            )
        x = rng.uniform(problem.lower, problem.upper)
        draws += 1
        if problem.is_feasible(x):
            points.append(x)
    logger.debug(f"Sampled {len(points)} feasible points in {draws} draws")
    return points


def armijo_feasible(
    problem: Problem, objective_index: int, x, d, cfg: SolverConfig
) -> Optional[float]:
    """Largest alpha in {1, A, A^2, ...} with sufficient decrease of f_i and feasibility"""
    x = problem.check_point(x)
    d = np.asarray(d, dtype=float)
    f0 = problem.f(x)[objective_index]
    slope = float(problem.jac_f(x)[objective_index] @ d)
    alpha = 1.0
    for _ in range(cfg.max_backtracks + 1):
        trial = x + alpha * d
        if (
            problem.f(trial)[objective_index] <= f0 + cfg.sigma * alpha * slope
            and problem.max_violation(trial) <= cfg.feas_tol
        ):
            return alpha
        alpha *= cfg.backtrack
    return None


def armijo_penalty(
    problem: Problem,
    x,
    d,
    st: PenaltyState,
    cfg: SolverConfig,
    bound_tol: Optional[float] = None,
) -> Optional[float]:
    """Largest alpha in {1, A, A^2, ...} with sufficient decrease of the merit

    With bound_tol set, a trial point is also rejected when any
    f_i(x + alpha d) exceeds f_i(x_hat) + bound_tol.
    """
    x = problem.check_point(x)
    d = np.asarray(d, dtype=float)
    p0 = penalty_value(problem, x, st)
    slope = float(penalty_gradient(problem, x, st) @ d)
    ceiling = None if bound_tol is None else st.reference_objectives(problem) + bound_tol
    alpha = 1.0
    for _ in range(cfg.max_backtracks + 1):
        trial = x + alpha * d
        if penalty_value(problem, trial, st) <= p0 + cfg.sigma * alpha * slope and (
            ceiling is None or np.all(problem.f(trial) <= ceiling)
        ):
            return alpha
        alpha *= cfg.backtrack
    return None


# ============================================================================
# Stage 1: feasible spread
# ============================================================================


def spread_stage(
    problem: Problem, x0: Sequence[np.ndarray], cfg: SolverConfig
) -> List[np.ndarray]:
    """Spread a feasible point set for cfg.spreads rounds

    Each round steps every current point along each objective's QP direction.
    The next round works on at most cfg.n_points of the new points, those
    with the largest crowding distance. The union of all rounds is
    deduplicated and filtered by crowding_min.
    """
    current = [problem.check_point(x) for x in x0]
    archive = list(current)
    identity = np.eye(problem.n)
    logger.info(f"Spread stage: {len(current)} points, {cfg.spreads} rounds")

    for round_index in range(cfg.spreads):
        produced: List[np.ndarray] = []
        for x in current:
            for i in range(problem.m):
                try:
                    sol = solve_qp(build_spread_qp(problem, x, identity, i))
                except QPNumericalError as e:
                    logger.warning(f"Spread QP failed for objective {i}, skipping: {e}")
                    continue
                if not sol.is_optimal:
                    logger.warning(f"Spread QP infeasible for objective {i}, skipping")
                    continue
                d = sol.direction
                if np.linalg.norm(d) <= cfg.d_tol:
                    produced.append(x)
                    continue
                alpha = armijo_feasible(problem, i, x, d, cfg)
                produced.append(x + alpha * d if alpha is not None else x)

        archive.extend(produced)
        if not produced:
            break
        objectives = np.array([problem.f(x) for x in produced])
        keep = truncate_by_crowding(objectives, cfg.n_points)
        current = [produced[k] for k in keep]
        logger.debug(
            f"Spread round {round_index + 1}: {len(produced)} new points, "
            f"{len(current)} carried forward"
        )

    decisions = np.array(archive)
    distinct = unique_rows(decisions)
    decisions = decisions[distinct]
    objectives = np.array([problem.f(x) for x in decisions])
    keep = crowding_filter(objectives, cfg.crowding_min)
    logger.info(
        f"Spread stage finished: {len(archive)} accumulated, {len(distinct)} distinct, "
        f"{len(keep)} above crowding {cfg.crowding_min}"
    )
    return [decisions[k] for k in keep]


# ============================================================================
# Stage 2: Pareto optimisation
# ============================================================================


def damped_bfgs_update(
    B: np.ndarray,
    s: np.ndarray,
    y: np.ndarray,
    max_condition: float = BFGS_MAX_CONDITION,
) -> np.ndarray:
    """Powell-damped BFGS update, keeps B symmetric positive definite

    The update is skipped when the damped curvature s^T r is negligible
    against s^T B s. When the updated matrix is not safely positive definite
    (smallest eigenvalue <= 0 or condition number above max_condition) B is
    reset to the identity.
    """
    s = np.asarray(s, dtype=float)
    y = np.asarray(y, dtype=float)
    if not np.any(s):
        return B
    Bs = B @ s
    sBs = float(s @ Bs)
    if not sBs > 0:
        return B
    sy = float(s @ y)
    theta = 1.0 if sy >= 0.2 * sBs else 0.8 * sBs / (sBs - sy)
    r = theta * y + (1.0 - theta) * Bs
    sr = float(s @ r)
    if sr <= BFGS_CURVATURE_TOL * sBs:
        logger.debug(f"Skipping BFGS update, damped curvature {sr:.3e}")
        return B
    updated = B - np.outer(Bs, Bs) / sBs + np.outer(r, r) / sr
    updated = 0.5 * (updated + updated.T)

    eigenvalues = np.linalg.eigvalsh(updated)
    if not eigenvalues[0] > 0 or eigenvalues[-1] > max_condition * eigenvalues[0]:
        logger.debug(
            f"BFGS update ill-conditioned (eigenvalues {eigenvalues[0]:.3e}.."
            f"{eigenvalues[-1]:.3e}), resetting to identity"
        )
        return np.eye(B.shape[0])
    return updated


def lagrangian_gradient(problem: Problem, x, multipliers: np.ndarray) -> np.ndarray:
    """grad of sum f_i + sum mu_i f_i + sum lambda_i g_i

    multipliers holds the m objective-bound entries followed by the a
    constraint entries, as returned by the stage-2 QP.
    """
    mu = multipliers[: problem.m]
    lam = multipliers[problem.m :]
    grad = problem.jac_f(x).T @ (1.0 + mu)
    if problem.a:
        grad = grad + problem.jac_g(x).T @ lam
    return grad


class CriticalityCheck(NamedTuple):
    """Residual of the Pareto-criticality test; residual is None when not checkable"""

    residual: Optional[float]
    tol: float

    @property
    def checkable(self) -> bool:
        return self.residual is not None

    @property
    def is_critical(self) -> Optional[bool]:
        return None if self.residual is None else self.residual <= self.tol


def check_pareto_critical(
    problem: Problem,
    x,
    multipliers: Optional[np.ndarray],
    tol: float = 1e-4,
    x_hat: Optional[np.ndarray] = None,
) -> CriticalityCheck:
    """Stationarity plus complementarity residual at x

    Residual is ||sum (1+mu_i) grad f_i + sum lambda_i grad g_i||_inf plus the
    largest |lambda_i g_i(x)|. With x_hat the objective-bound terms
    |mu_i (f_i(x) - f_i(x_hat))| are included too.
    """
    if multipliers is None:
        return CriticalityCheck(None, tol)
    multipliers = np.asarray(multipliers, dtype=float)
    if multipliers.shape != (problem.m + problem.a,):
        raise ValueError(
            f"Expected {problem.m + problem.a} multipliers, got shape {multipliers.shape}"
        )
    x = problem.check_point(x)
    stationarity = float(np.max(np.abs(lagrangian_gradient(problem, x, multipliers))))
    complementarity = 0.0
    if problem.a:
        complementarity = float(np.max(np.abs(multipliers[problem.m :] * problem.g(x))))
    if x_hat is not None:
        bounds = problem.f(x) - problem.f(x_hat)
        complementarity = max(
            complementarity, float(np.max(np.abs(multipliers[: problem.m] * bounds)))
        )
    return CriticalityCheck(stationarity + complementarity, tol)


def _shrink_eps(problem: Problem, state: SolverState, cfg: SolverConfig) -> float:
    """New eps bounded by the smallest strictly positive constraint or bound margin"""
    margins = np.concatenate([-problem.g(state.x), state.f_hat - problem.f(state.x)])
    positive = margins[margins > 0]
    if positive.size:
        eps = min(cfg.backtrack**cfg.k_exp * state.eps, float(positive.min()))
    else:
        eps = cfg.backtrack * state.eps
    return max(eps, cfg.eps_floor)


def _grow_penalty(
    problem: Problem, state: SolverState, cfg: SolverConfig, d_of, target_of
) -> Optional[np.ndarray]:
    """Multiply pi by penalty_growth until grad P^T d <= target

    d_of maps a PenaltyState to the direction and target_of to the required
    slope bound. Returns the accepted direction or None at the growth cap.
    """
    for _ in range(cfg.max_penalty_growths + 1):
        st = state.penalty(cfg)
        d = d_of(st)
        if penalty_gradient(problem, state.x, st) @ d <= target_of(st, d):
            return d
        state.pi *= cfg.penalty_growth
    return None


def _qp_step(problem: Problem, state: SolverState, sol, cfg: SolverConfig) -> bool:
    """Descent step from an optimal QP2 solution; False when the point stops"""
    direction = sol.direction
    state.eps = _shrink_eps(problem, state, cfg)
    d = _grow_penalty(
        problem,
        state,
        cfg,
        d_of=lambda st: direction,
        target_of=lambda st, d: -0.5 * float(d @ state.hessian @ d),
    )
    if d is None:
        logger.warning(
            f"Abandoning point after {cfg.max_penalty_growths} penalty growths (pi={state.pi:.3e})"
        )
        state.abandoned = True
        return False

    st = state.penalty(cfg)
    alpha = armijo_penalty(problem, state.x, d, st, cfg, bound_tol=cfg.bound_tol)
    if alpha is None:
        logger.debug(f"No Armijo step on the merit at iteration {state.iterations}")
        return False

    x_new = state.x + alpha * d
    y = lagrangian_gradient(problem, x_new, sol.multipliers) - lagrangian_gradient(
        problem, state.x, sol.multipliers
    )
    state.hessian = damped_bfgs_update(state.hessian, x_new - state.x, y)
    state.x = x_new
    state.accepted.append(x_new)
    return True


def _fallback_step(problem: Problem, state: SolverState, cfg: SolverConfig) -> bool:
    """Merit steepest-descent step used when QP2 is infeasible"""
    if max_violation(problem, state.x, state.penalty(cfg)) > 0:
        for _ in range(cfg.max_eps_shrinks):
            if np.any(violation_combination(problem, state.x, state.penalty(cfg))):
                break
            state.eps = max(cfg.backtrack * state.eps, cfg.eps_floor)

    d = _grow_penalty(
        problem,
        state,
        cfg,
        d_of=lambda st: fallback_direction(problem, state.x, st),
        target_of=lambda st, d: -max_violation(problem, state.x, st),
    )
    if d is None:
        logger.warning(
            f"Abandoning infeasible-QP point after {cfg.max_penalty_growths} penalty growths"
        )
        state.abandoned = True
        return False
    if np.linalg.norm(d) <= cfg.d_tol:
        logger.debug("Merit gradient vanished on the fallback branch")
        return False

    alpha = armijo_penalty(
        problem, state.x, d, state.penalty(cfg), cfg, bound_tol=cfg.bound_tol
    )
    if alpha is None:
        return False
    state.x = state.x + alpha * d
    state.accepted.append(state.x)
    return True


def optimize_point(problem: Problem, x_start, cfg: SolverConfig) -> SolverState:
    """Run the Pareto stage from one start point, which is also its reference"""
    x0 = problem.check_point(x_start)
    state = SolverState(
        x=x0,
        x_hat=x0.copy(),
        f_hat=problem.f(x0),
        hessian=np.eye(problem.n),
        eps=cfg.eps0,
        pi=cfg.pi0,
    )

    while state.iterations < cfg.max_iters:
        state.iterations += 1
        try:
            sol = solve_qp(
                build_stage2_qp(problem, state.x, state.x_hat, state.hessian, state.f_hat)
            )
        except (QPInputError, QPNumericalError) as e:
            logger.debug(f"Stage-2 QP failed, using the merit gradient: {e}")
            sol = None

        if sol is not None and sol.is_optimal:
            if np.linalg.norm(sol.direction) <= cfg.d_tol:
                check = check_pareto_critical(
                    problem, state.x, sol.multipliers, cfg.critical_tol, x_hat=state.x_hat
                )
                if check.is_critical:
                    state.converged = True
                    state.multipliers = sol.multipliers
                    break
                if np.array_equal(state.hessian, np.eye(problem.n)):
                    logger.debug(
                        f"Short step with criticality residual {check.residual:.3e}, stopping"
                    )
                    break
                # Short step only because B is stiff: restart the curvature model
                state.hessian = np.eye(problem.n)
                state.hessian_resets += 1
                continue
            moved = _qp_step(problem, state, sol, cfg)
        else:
            moved = _fallback_step(problem, state, cfg)
        if not moved:
            break
    else:
        logger.debug(f"Point hit max_iters={cfg.max_iters} without converging")

    return state


def _entries(problem: Problem, state: SolverState):
    """Archive rows (x, converged, residual) contributed by one start point"""
    rows = [(x, False, np.nan) for x in state.accepted]
    if rows and np.array_equal(rows[-1][0], state.x):
        rows.pop()
    residual = np.nan
    if state.converged:
        residual = check_pareto_critical(
            problem, state.x, state.multipliers, x_hat=state.x_hat
        ).residual
    # The final iterate is kept even when the point stalls or hits max_iters
    rows.append((state.x, state.converged, residual))
    return rows


def pareto_stage(
    problem: Problem, x_start: Sequence[np.ndarray], cfg: SolverConfig
) -> Front:
    """Optimise every start point and filter the archive into a Front

    Start points run on a thread pool when FEATURE_PARALLEL_PARETO is set;
    results are merged in start order either way.
    """
    starts = [problem.check_point(x) for x in x_start]
    logger.info(f"Pareto stage: {len(starts)} start points")

    if _flags.USE_PARALLEL_PARETO and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=_flags.PARETO_WORKERS) as pool:
            states = list(pool.map(lambda x: optimize_point(problem, x, cfg), starts))
    else:
        states = [optimize_point(problem, x, cfg) for x in starts]

    converged = sum(s.converged for s in states)
    abandoned = sum(s.abandoned for s in states)
    resets = sum(s.hessian_resets for s in states)
    logger.info(
        f"Pareto stage: {converged}/{len(states)} converged, {abandoned} abandoned, "
        f"{resets} Hessian restarts"
    )

    rows = [row for state in states for row in _entries(problem, state)]
    if not rows:
        return Front(
            np.zeros((0, problem.n)),
            np.zeros((0, problem.m)),
            problem.name,
            objective_sign=problem.objective_sign,
        )

    decisions = np.array([row[0] for row in rows])
    feasible = np.array(
        [problem.max_violation(x) <= cfg.output_feas_tol for x in decisions]
    )
    archive = Front(
        decisions=decisions,
        objectives=np.array([problem.f(x) for x in decisions]),
        problem_name=problem.name,
        converged=np.array([row[1] for row in rows]),
        criticality=np.array([row[2] for row in rows]),
        objective_sign=problem.objective_sign,
    ).subset(np.flatnonzero(feasible))

    front = archive.subset(nondominated_filter(archive))
    if len(front):
        front = front.subset(crowding_filter(front, cfg.crowding_min))
        front = front.subset(truncate_by_crowding(front, cfg.top_q))
    logger.info(
        f"Pareto stage finished: {len(rows)} archived, {len(archive)} feasible, "
        f"{len(front)} in the front"
    )
    return front
