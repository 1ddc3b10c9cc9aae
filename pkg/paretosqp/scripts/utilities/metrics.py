"""
Purity and spread metrics for Pareto front approximations

All metrics work on objective vectors in minimisation sign.

    purity  |reference| / |solver points matching the reference|, smaller is better
    gamma   largest gap between consecutive sorted coordinates, anchors included
    delta   normalised variation of those gaps around their interior mean

Anchors are the per-objective minimum and maximum of the combined reference
front (see extreme_anchors).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .constants import DEFAULT_MATCH_TOL, METRIC_DECIMALS
from .pareto_front import Front, nondominated_filter

logger = logging.getLogger(__name__)

Anchors = Tuple[np.ndarray, np.ndarray]


class MetricsInputError(ValueError):
    """Raised for empty or inconsistent metric inputs"""

    pass


@dataclass
class MetricsReport:
    """Metric values for one solver front against a reference"""

    purity: float
    gamma: float
    delta: float
    front_size: int
    reference_size: int
    label: str = field(default="")

    def as_row(self, decimals: int = METRIC_DECIMALS) -> List:
        def fmt(value: float) -> str:
            if math.isnan(value):
                return "n/a"
            if math.isinf(value):
                return "inf"
            return f"{value:.{decimals}f}"

        return [
            self.label,
            self.front_size,
            fmt(self.purity),
            fmt(self.gamma),
            fmt(self.delta),
        ]

    def to_dict(self) -> Dict:
        return {
            "label": self.label,
            "front_size": self.front_size,
            "reference_size": self.reference_size,
            "purity": self.purity,
            "gamma": self.gamma,
            "delta": self.delta,
        }


REPORT_HEADERS = ["front", "points", "purity", "gamma", "delta"]


def build_reference_front(fronts: List[Front]) -> Front:
    """Nondominated union of several fronts, duplicates removed"""
    if not fronts:
        raise MetricsInputError("At least one front is needed to build a reference")
    widths = {front.m for front in fronts}
    if len(widths) > 1:
        raise MetricsInputError(f"Fronts have mixed objective counts: {sorted(widths)}")
    union = Front.concat(fronts)
    reference = union.subset(nondominated_filter(union))
    logger.debug(
        f"Reference front: {len(reference)} of {len(union)} pooled points nondominated"
    )
    return reference


def extreme_anchors(reference: Front) -> Anchors:
    """Per-objective (min, max) of the reference front"""
    if len(reference) == 0:
        raise MetricsInputError("Reference front is empty")
    return reference.objectives.min(axis=0), reference.objectives.max(axis=0)


def purity(
    solver_front: Front, reference: Front, match_tol: float = DEFAULT_MATCH_TOL
) -> float:
    """|reference| divided by the number of solver points on the reference

    A solver point counts when it lies within match_tol of some reference point
    in the infinity norm. Returns inf when no point matches.
    """
    if match_tol < 0:
        raise MetricsInputError(f"match_tol must be nonnegative, got {match_tol}")
    if len(reference) == 0:
        raise MetricsInputError("Reference front is empty")
    if len(solver_front) == 0:
        return math.inf
    if solver_front.m != reference.m:
        raise MetricsInputError(
            f"Front has {solver_front.m} objectives, reference has {reference.m}"
        )

    distance = np.max(
        np.abs(solver_front.objectives[:, None, :] - reference.objectives[None, :, :]),
        axis=2,
    )
    matched = int(np.count_nonzero(np.any(distance <= match_tol, axis=1)))
    if matched == 0:
        return math.inf
    # Near-duplicate solver points can match the same reference point
    return len(reference) / min(matched, len(reference))


def _sorted_gaps(column: np.ndarray, low: float, high: float):
    coords = np.sort(column)
    boundary_low = abs(coords[0] - low)
    boundary_high = abs(high - coords[-1])
    interior = np.diff(coords)
    return boundary_low, interior, boundary_high


def gamma_spread(solver_front: Front, extremes: Anchors) -> float:
    """Largest consecutive gap over all objectives, anchors included"""
    if len(solver_front) == 0:
        raise MetricsInputError("Gamma needs a nonempty front")
    low, high = extremes
    gamma = 0.0
    for j in range(solver_front.m):
        first, interior, last = _sorted_gaps(solver_front.objectives[:, j], low[j], high[j])
        gamma = max(gamma, first, last, float(interior.max(initial=0.0)))
    return float(gamma)


def delta_spread(solver_front: Front, extremes: Anchors) -> float:
    """Largest per-objective ratio (d0 + dN + sum|d_i - mean|) / (d0 + dN + (N-1) mean)"""
    count = len(solver_front)
    if count < 2:
        raise MetricsInputError(f"Delta needs at least 2 points, got {count}")
    low, high = extremes
    delta = 0.0
    for j in range(solver_front.m):
        first, interior, last = _sorted_gaps(solver_front.objectives[:, j], low[j], high[j])
        mean_gap = float(interior.mean())
        numerator = first + last + float(np.sum(np.abs(interior - mean_gap)))
        denominator = first + last + (count - 1) * mean_gap
        ratio = 0.0 if denominator == 0 else numerator / denominator
        delta = max(delta, ratio)
    return float(delta)


def evaluate_front(
    solver_front: Front,
    reference: Front,
    match_tol: float = DEFAULT_MATCH_TOL,
    anchors: Optional[Anchors] = None,
    label: str = "",
) -> MetricsReport:
    """Purity, gamma and delta of one front; delta is NaN below 2 points"""
    anchors = anchors if anchors is not None else extreme_anchors(reference)
    if len(solver_front) == 0:
        logger.warning(f"Front '{label}' is empty; spread metrics are undefined")
        return MetricsReport(math.inf, math.nan, math.nan, 0, len(reference), label)

    delta = math.nan
    if len(solver_front) >= 2:
        delta = delta_spread(solver_front, anchors)
    else:
        logger.warning(f"Front '{label}' has a single point; delta is undefined")

    return MetricsReport(
        purity=purity(solver_front, reference, match_tol),
        gamma=gamma_spread(solver_front, anchors),
        delta=delta,
        front_size=len(solver_front),
        reference_size=len(reference),
        label=label,
    )
