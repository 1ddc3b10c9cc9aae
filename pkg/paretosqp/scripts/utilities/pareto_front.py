"""
Front container plus nondominance and crowding filters

Objective values are always stored in minimisation sign. Index-returning
functions return ascending 0-based indices so callers can subset decisions
and objectives together.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)


@dataclass
class Front:
    """A set of decision vectors with their objective vectors

    decisions may have zero columns for fronts ingested without decision data.
    """

    decisions: np.ndarray
    objectives: np.ndarray
    problem_name: str
    converged: Optional[np.ndarray] = None
    criticality: Optional[np.ndarray] = None
    objective_sign: float = 1.0

    def __post_init__(self):
        self.objectives = np.atleast_2d(np.asarray(self.objectives, dtype=float))
        if not self.objectives.size:
            self.objectives = self.objectives.reshape(0, self.objectives.shape[-1])
        rows = self.objectives.shape[0]
        decisions = np.asarray(self.decisions, dtype=float)
        if decisions.size == 0 and not (decisions.ndim == 2 and decisions.shape[0] == rows):
            decisions = np.zeros((rows, 0))
        self.decisions = np.atleast_2d(decisions)
        if self.decisions.shape[0] != rows:
            raise ValueError(
                f"Front has {self.decisions.shape[0]} decision rows but {rows} objective rows"
            )
        if self.converged is None:
            self.converged = np.zeros(rows, dtype=bool)
        else:
            self.converged = np.asarray(self.converged, dtype=bool).reshape(rows)
        if self.criticality is None:
            self.criticality = np.full(rows, np.nan)
        else:
            self.criticality = np.asarray(self.criticality, dtype=float).reshape(rows)

    def __len__(self) -> int:
        return self.objectives.shape[0]

    @property
    def n(self) -> int:
        return self.decisions.shape[1]

    @property
    def m(self) -> int:
        return self.objectives.shape[1]

    @property
    def converged_count(self) -> int:
        return int(np.count_nonzero(self.converged))

    def subset(self, indices: Sequence[int]) -> "Front":
        idx = np.asarray(indices, dtype=int)
        return Front(
            decisions=self.decisions[idx],
            objectives=self.objectives[idx],
            problem_name=self.problem_name,
            converged=self.converged[idx],
            criticality=self.criticality[idx],
            objective_sign=self.objective_sign,
        )

    def native_objectives(self) -> np.ndarray:
        return self.objective_sign * self.objectives

    @classmethod
    def concat(cls, fronts: List["Front"], problem_name: Optional[str] = None) -> "Front":
        if not fronts:
            raise ValueError("Cannot concatenate an empty list of fronts")
        widths = {f.m for f in fronts}
        if len(widths) > 1:
            raise ValueError(f"Fronts have mixed objective counts: {sorted(widths)}")
        # Drop decision data when fronts disagree on n
        dims = {f.n for f in fronts}
        decisions = (
            np.vstack([f.decisions for f in fronts])
            if len(dims) == 1
            else np.zeros((sum(len(f) for f in fronts), 0))
        )
        return cls(
            decisions=decisions,
            objectives=np.vstack([f.objectives for f in fronts]),
            problem_name=problem_name or fronts[0].problem_name,
            converged=np.concatenate([f.converged for f in fronts]),
            criticality=np.concatenate([f.criticality for f in fronts]),
            objective_sign=fronts[0].objective_sign,
        )


FrontOrArray = Union[Front, np.ndarray, Sequence[Sequence[float]]]


def _objective_matrix(points: FrontOrArray) -> np.ndarray:
    if isinstance(points, Front):
        return points.objectives
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, arr.shape[-1] if arr.ndim == 2 else 0)
    if arr.ndim != 2:
        raise ValueError(f"Expected a 2-D array of objective vectors, got shape {arr.shape}")
    return arr


def _nondominated_two(obj: np.ndarray) -> np.ndarray:
    """Sweep by increasing f1 keeping strict f2 improvements"""
    idx = np.arange(obj.shape[0])
    order = np.lexsort((idx, obj[:, 1], obj[:, 0]))
    keep = []
    best_f2 = np.inf
    for i in order:
        if obj[i, 1] < best_f2:
            keep.append(i)
            best_f2 = obj[i, 1]
    return np.sort(np.asarray(keep, dtype=int))


def _nondominated_general(obj: np.ndarray) -> np.ndarray:
    le = np.all(obj[:, None, :] <= obj[None, :, :], axis=2)
    lt = np.any(obj[:, None, :] < obj[None, :, :], axis=2)
    dominated = np.any(le & lt, axis=0)
    equal = np.all(obj[:, None, :] == obj[None, :, :], axis=2)
    duplicate = np.any(np.triu(equal, k=1), axis=0)
    return np.flatnonzero(~dominated & ~duplicate)


def nondominated_filter(points: FrontOrArray) -> np.ndarray:
    """Indices of points not dominated by any other point

    u dominates v iff u <= v componentwise and u != v. Exact duplicates keep
    the lowest index only.
    """
    obj = _objective_matrix(points)
    if obj.shape[0] == 0:
        return np.zeros(0, dtype=int)
    if obj.shape[1] == 2:
        return _nondominated_two(obj)
    return _nondominated_general(obj)


def crowding_values(points: FrontOrArray) -> np.ndarray:
    """NSGA-II crowding distance in objective space

    Boundary points of every objective get +inf. Objectives with zero range
    contribute nothing.
    """
    obj = _objective_matrix(points)
    count = obj.shape[0]
    if count == 0:
        raise ValueError("Crowding distance needs a nonempty front")
    distance = np.zeros(count)
    if count <= 2:
        distance[:] = np.inf
        return distance

    for j in range(obj.shape[1]):
        order = np.argsort(obj[:, j], kind="stable")
        column = obj[order, j]
        distance[order[0]] = np.inf
        distance[order[-1]] = np.inf
        span = column[-1] - column[0]
        if span > 0:
            distance[order[1:-1]] += (column[2:] - column[:-2]) / span
    return distance


def crowding_filter(points: FrontOrArray, c: float) -> np.ndarray:
    """Indices whose crowding distance is strictly greater than c"""
    obj = _objective_matrix(points)
    if obj.shape[0] == 0:
        return np.zeros(0, dtype=int)
    return np.flatnonzero(crowding_values(obj) > c)


def truncate_by_crowding(points: FrontOrArray, q: Optional[int]) -> np.ndarray:
    """Indices of the q most isolated points, ascending; all indices when q is None"""
    obj = _objective_matrix(points)
    count = obj.shape[0]
    if q is None or count <= q:
        return np.arange(count)
    if q < 1:
        raise ValueError(f"Truncation size must be positive, got {q}")
    crowd = crowding_values(obj)
    order = np.lexsort((np.arange(count), -crowd))
    return np.sort(order[:q])


def unique_rows(values: np.ndarray) -> np.ndarray:
    """Indices of the first occurrence of every distinct row, ascending"""
    arr = np.asarray(values, dtype=float)
    if arr.shape[0] == 0:
        return np.zeros(0, dtype=int)
    _, first = np.unique(arr, axis=0, return_index=True)
    return np.sort(first)
