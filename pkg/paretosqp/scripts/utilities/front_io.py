"""
Front persistence in CSV and JSON

CSV layout:

    x1,x2,f1,f2
    0.1,0.2,-3.5,-12.25
    # problem=mop3
    # sign=max

The header is the first line so the file loads as plain CSV; metadata
follows the data as comment lines, and the sign marker is only written for
"max" fronts. Objectives are written in the native sign of the problem
("max" fronts are negated on write and re-negated on read) with 17
significant digits so decision vectors survive a round trip bit for bit.
Comment lines are accepted anywhere on read, and files without decision
columns (header f1..fm only) are accepted for externally produced fronts.
"""

import csv
import json
import logging
import math
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import jsonschema
import numpy as np

from .constants import FLOAT_FORMAT, FRONT_FORMATS, SIGN_MAX, SIGN_MIN
from .pareto_front import Front

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

FRONT_JSON_SCHEMA = {
    "type": "object",
    "required": ["problem", "points"],
    "properties": {
        "problem": {"type": "string"},
        "sign": {"enum": [SIGN_MIN, SIGN_MAX]},
        "config": {"type": ["object", "null"]},
        "counters": {"type": ["object", "null"]},
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["f"],
                "properties": {
                    "x": {"type": "array", "items": {"type": "number"}},
                    "f": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                    "converged": {"type": "boolean"},
                    "criticality": {"type": ["number", "null"]},
                },
            },
        },
    },
}

_HEADER_PATTERN = re.compile(r"^([xf])(\d+)$")


class FrontParseError(ValueError):
    """Raised when a front file cannot be parsed; carries the path and line"""

    def __init__(self, path: PathLike, line: Optional[int], message: str):
        self.path = Path(path)
        self.line = line
        location = f"{self.path}:{line}" if line is not None else str(self.path)
        super().__init__(f"{location}: {message}")


def _format_for(path: Path, fmt: Optional[str]) -> str:
    fmt = (fmt or path.suffix.lstrip(".") or "csv").lower()
    if fmt not in FRONT_FORMATS:
        raise ValueError(f"Unsupported front format '{fmt}'. Use one of {FRONT_FORMATS}")
    return fmt


def _sign_label(front: Front) -> str:
    return SIGN_MAX if front.objective_sign < 0 else SIGN_MIN


def write_front(
    front: Front,
    path: PathLike,
    fmt: Optional[str] = None,
    config: Optional[Dict[str, Any]] = None,
    counters: Optional[Dict[str, int]] = None,
) -> Path:
    """Write a front to CSV or JSON; the format defaults to the file suffix"""
    path = Path(path)
    fmt = _format_for(path, fmt)
    path.parent.mkdir(parents=True, exist_ok=True)
    native = front.native_objectives()

    if fmt == "csv":
        header = [f"x{i + 1}" for i in range(front.n)] + [
            f"f{j + 1}" for j in range(front.m)
        ]
        with open(path, "w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            for x, values in zip(front.decisions, native):
                writer.writerow([FLOAT_FORMAT.format(v) for v in np.concatenate([x, values])])
            f.write(f"# problem={front.problem_name}\n")
            if front.objective_sign < 0:
                f.write(f"# sign={SIGN_MAX}\n")
    else:
        document = {
            "problem": front.problem_name,
            "sign": _sign_label(front),
            "config": config,
            "points": [
                {
                    "x": [float(v) for v in x],
                    "f": [float(v) for v in values],
                    "converged": bool(conv),
                    "criticality": None if math.isnan(crit) else float(crit),
                }
                for x, values, conv, crit in zip(
                    front.decisions, native, front.converged, front.criticality
                )
            ],
            "counters": counters,
        }
        with open(path, "w") as f:
            json.dump(document, f, indent=2)
            f.write("\n")

    logger.info(f"Wrote {len(front)} points to {path}")
    return path


def _parse_header(path: Path, line_no: int, header: List[str]):
    kinds = []
    for column in header:
        match = _HEADER_PATTERN.match(column.strip())
        if not match:
            raise FrontParseError(path, line_no, f"unexpected column '{column}'")
        kinds.append(match.group(1))
    n = kinds.count("x")
    m = kinds.count("f")
    if kinds != ["x"] * n + ["f"] * m:
        raise FrontParseError(path, line_no, "decision columns must precede objective columns")
    if m == 0:
        raise FrontParseError(path, line_no, "no objective columns")
    return n, m


def _read_csv(path: Path, default_problem: str) -> Front:
    metadata: Dict[str, str] = {}
    header = None
    rows: List[List[float]] = []

    with open(path, newline="") as f:
        for line_no, raw in enumerate(f, start=1):
            text = raw.strip()
            if not text:
                continue
            if text.startswith("#"):
                key, _, value = text.lstrip("#").strip().partition("=")
                metadata[key.strip()] = value.strip()
                continue
            cells = next(csv.reader([text]))
            if header is None:
                header = _parse_header(path, line_no, cells)
                continue
            if len(cells) != sum(header):
                raise FrontParseError(
                    path, line_no, f"expected {sum(header)} values, found {len(cells)}"
                )
            try:
                rows.append([float(cell) for cell in cells])
            except ValueError as e:
                raise FrontParseError(path, line_no, f"non-numeric value: {e}") from e

    if header is None:
        raise FrontParseError(path, None, "missing header row")
    if not rows:
        raise FrontParseError(path, None, "front file contains no points")

    sign_label = metadata.get("sign", SIGN_MIN)
    if sign_label not in (SIGN_MIN, SIGN_MAX):
        raise FrontParseError(path, None, f"unknown sign marker '{sign_label}'")
    sign = -1.0 if sign_label == SIGN_MAX else 1.0
    n, _ = header
    data = np.array(rows)
    return Front(
        decisions=data[:, :n],
        objectives=sign * data[:, n:],
        problem_name=metadata.get("problem", default_problem),
        objective_sign=sign,
    )


def _read_json(path: Path, default_problem: str) -> Front:
    try:
        with open(path) as f:
            document = json.load(f)
    except json.JSONDecodeError as e:
        raise FrontParseError(path, e.lineno, f"invalid JSON: {e.msg}") from e
    try:
        jsonschema.validate(document, FRONT_JSON_SCHEMA)
    except jsonschema.ValidationError as e:
        raise FrontParseError(path, None, f"schema violation: {e.message}") from e

    points = document["points"]
    if not points:
        raise FrontParseError(path, None, "front file contains no points")
    widths = {len(p["f"]) for p in points}
    dims = {len(p.get("x", [])) for p in points}
    if len(widths) != 1 or len(dims) != 1:
        raise FrontParseError(path, None, "points have inconsistent dimensions")

    sign = -1.0 if document.get("sign") == SIGN_MAX else 1.0
    return Front(
        decisions=np.array([p.get("x", []) for p in points], dtype=float),
        objectives=sign * np.array([p["f"] for p in points], dtype=float),
        problem_name=document.get("problem") or default_problem,
        converged=np.array([p.get("converged", False) for p in points]),
        criticality=np.array(
            [np.nan if p.get("criticality") is None else p["criticality"] for p in points]
        ),
        objective_sign=sign,
    )


def read_front(path: PathLike, fmt: Optional[str] = None) -> Front:
    """Read a front written by write_front or an external CSV of objectives

    Raises:
        FileNotFoundError: If the file does not exist
        FrontParseError: If the content is malformed or holds no points
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Front file not found: {path}")
    try:
        fmt = _format_for(path, fmt)
    except ValueError as e:
        raise FrontParseError(path, None, str(e)) from e
    reader = _read_csv if fmt == "csv" else _read_json
    front = reader(path, default_problem=path.stem)
    logger.debug(f"Read {len(front)} points from {path}")
    return front
