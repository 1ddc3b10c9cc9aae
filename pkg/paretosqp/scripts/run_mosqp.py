#!/usr/bin/env python3
"""
MOSQP Benchmark CLI
Runs the two-stage solver on the benchmark problems, writes fronts and
computes purity / spread reports against reference fronts.

Commands:
    run         initialize -> spread stage -> Pareto stage, write the front
    metrics     purity, gamma and delta for one or more front files
    reference   write the analytic or grid reference front of a benchmark

Exit codes: 0 success, 2 usage or input error, 3 solver failure.
"""
import argparse
import json
import sys
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

# Load environment variables
from dotenv import load_dotenv

REPO_ROOT = Path(__file__).resolve().parent.parent.parent

env_file = REPO_ROOT / ".env"
if env_file.is_file():
    load_dotenv(env_file)

# Allow running as a plain script from a checkout
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from paretosqp.scripts.utilities.audit_logger import AuditLogger
from paretosqp.scripts.utilities.config_manager import ConfigError, ConfigManager
from paretosqp.scripts.utilities.constants import (
    DEFAULT_LOG_LEVEL,
    DEFAULT_MATCH_TOL,
    DEFAULT_REFERENCE_RESOLUTION,
    EXIT_SOLVER_FAILURE,
    EXIT_SUCCESS,
    EXIT_USAGE_ERROR,
    FRONT_FORMATS,
    LOG_DATE_FORMAT,
    LOG_FORMAT,
    METRIC_DECIMALS,
    PROBLEM_NAMES,
)
from paretosqp.scripts.utilities.front_io import FrontParseError, read_front, write_front
from paretosqp.scripts.utilities.metrics import (
    REPORT_HEADERS,
    MetricsInputError,
    build_reference_front,
    evaluate_front,
    extreme_anchors,
)
from paretosqp.scripts.utilities.mosqp_solver import (
    InitializationError,
    SolverConfig,
    SolverConfigError,
    initialize_points,
    pareto_stage,
    spread_stage,
)
from paretosqp.scripts.utilities.output import ConsoleOutput
from paretosqp.scripts.utilities.pareto_front import Front
from paretosqp.scripts.utilities.problems import (
    Problem,
    ProblemDimensionError,
    UnknownProblemError,
    get_problem,
    reference_front,
    with_counter,
)

logger = logging.getLogger(__name__)

# CLI flag -> SolverConfig field
OVERRIDE_FLAGS = {
    "seed": "seed",
    "n_points": "n_points",
    "spreads": "spreads",
    "k": "k_exp",
    "b": "b_shape",
    "sigma": "sigma",
    "growth": "penalty_growth",
    "backtrack": "backtrack",
    "eps0": "eps0",
    "pi0": "pi0",
    "crowding_min": "crowding_min",
    "d_tol": "d_tol",
    "max_iters": "max_iters",
    "top_q": "top_q",
    "critical_tol": "critical_tol",
    "bound_tol": "bound_tol",
}

ANALYTIC_FRONTS = {"zdt1", "zdt2"}


@dataclass
class RunSpec:
    """One solver invocation resolved from flags and the config file"""

    problem: str
    overrides: Dict[str, Any] = field(default_factory=dict)
    output: Optional[Path] = None
    fmt: str = "csv"
    dimension: Optional[int] = None

    def __post_init__(self):
        self.problem = self.problem.lower().strip()
        if self.output is None:
            self.output = Path(f"{self.problem}_front.{self.fmt}")

    @classmethod
    def from_args(cls, args, config: ConfigManager) -> "RunSpec":
        overrides = config.get_solver_overrides(args.problem)
        for flag, name in OVERRIDE_FLAGS.items():
            value = getattr(args, flag, None)
            if value is not None:
                overrides[name] = value
        dimension = args.dimension or config.get_problem_dimension(args.problem)
        return cls(
            problem=args.problem,
            overrides=overrides,
            output=Path(args.out) if args.out else None,
            fmt=args.format,
            dimension=dimension,
        )

    def solver_config(self) -> SolverConfig:
        return SolverConfig.from_overrides(self.overrides)


def _console(args) -> ConsoleOutput:
    return ConsoleOutput(json_output=getattr(args, "json", False))


def _journal(args) -> Optional[AuditLogger]:
    return AuditLogger(Path(args.audit_log)) if getattr(args, "audit_log", None) else None


def _point_set(problem: Problem, points) -> Front:
    """Initial or spread-stage decisions as a Front for plotting"""
    decisions = np.array(points, dtype=float).reshape(-1, problem.n)
    return Front(
        decisions=decisions,
        objectives=np.array([problem.f(x) for x in decisions]).reshape(-1, problem.m),
        problem_name=problem.name,
        objective_sign=problem.objective_sign,
    )


def cmd_run(args):
    """Run both solver stages on a benchmark and write the front"""
    console = _console(args)
    journal = _journal(args)

    try:
        spec = RunSpec.from_args(args, ConfigManager(args.config))
        problem = get_problem(spec.problem, spec.dimension)
        cfg = spec.solver_config()
    except (UnknownProblemError, SolverConfigError, ConfigError, FileNotFoundError) as e:
        console.error(str(e))
        return EXIT_USAGE_ERROR
    except ValueError as e:
        console.error(f"Invalid problem setup: {e}")
        return EXIT_USAGE_ERROR

    for path in (args.initial_out, args.spread_out):
        if path and Path(path).suffix.lstrip(".").lower() not in FRONT_FORMATS:
            console.error(f"Point set output '{path}' must end in one of {FRONT_FORMATS}")
            return EXIT_USAGE_ERROR

    problem, counter = with_counter(problem)
    run_id = journal.log_run_start(problem.name, cfg.to_dict()) if journal else None
    console.info(
        f"Running {problem.name} (n={problem.n}, N={cfg.n_points}, K={cfg.spreads}, "
        f"k={cfg.k_exp}, b={cfg.b_shape}, sigma={cfg.sigma}, M={cfg.penalty_growth}, "
        f"A={cfg.backtrack})"
    )

    try:
        starts = initialize_points(problem, cfg)
        spread = spread_stage(problem, starts, cfg)
        if journal:
            journal.log_spread_completion(run_id, problem.name, len(starts), len(spread))
        front = pareto_stage(problem, spread, cfg)
        if journal:
            journal.log_pareto_completion(run_id, problem.name, len(front), front.converged_count)
    except InitializationError as e:
        console.error(f"Initialization failed: {e}")
        if journal:
            journal.log_run_failure(run_id, problem.name, str(e))
        return EXIT_SOLVER_FAILURE

    counters = counter.as_dict()
    write_front(front, spec.output, spec.fmt, config=cfg.to_dict(), counters=counters)
    for path, points in ((args.initial_out, starts), (args.spread_out, spread)):
        if path:
            write_front(_point_set(problem, points), path, config=cfg.to_dict())
    if journal:
        journal.log_run_completion(
            run_id, problem.name, len(front), front.converged_count, str(spec.output), counters
        )

    console.success(f"Front of {len(front)} points written to {spec.output}")
    console.summary(
        f"{problem.name} run summary",
        {
            "problem": problem.name,
            "front_size": len(front),
            "converged": front.converged_count,
            "spread_points": len(spread),
            **counters,
            "output": str(spec.output),
        },
    )
    return EXIT_SUCCESS


def cmd_metrics(args):
    """Compute purity and spread metrics of front files against a reference"""
    console = _console(args)
    journal = _journal(args)

    try:
        fronts = [read_front(path) for path in args.fronts]
        if args.reference:
            reference = read_front(args.reference)
            reference_label = args.reference
        else:
            pool = list(fronts)
            problem_name = (args.problem or fronts[0].problem_name).lower()
            if problem_name in ANALYTIC_FRONTS:
                pool.append(reference_front(problem_name, args.resolution, fronts[0].n or None))
            reference = build_reference_front(pool)
            reference_label = f"combined ({len(pool)} fronts)"

        anchors = extreme_anchors(reference)
        reports = [
            evaluate_front(front, reference, args.match_tol, anchors, label=Path(path).name)
            for path, front in zip(args.fronts, fronts)
        ]
    except (FrontParseError, FileNotFoundError, MetricsInputError) as e:
        console.error(str(e))
        return EXIT_USAGE_ERROR
    except ValueError as e:
        console.error(f"Invalid metrics input: {e}")
        return EXIT_USAGE_ERROR

    console.table(
        REPORT_HEADERS,
        [report.as_row(METRIC_DECIMALS) for report in reports],
        title=f"Metrics against {reference_label} ({len(reference)} points)",
    )
    if args.report:
        Path(args.report).write_text(
            json.dumps([report.to_dict() for report in reports], indent=2) + "\n"
        )
        console.info(f"Report written to {args.report}")
    if journal:
        journal.log_metrics([report.to_dict() for report in reports], reference_label)
    return EXIT_SUCCESS


def cmd_reference(args):
    """Write the reference front of a benchmark"""
    console = _console(args)
    journal = _journal(args)

    try:
        front = reference_front(args.problem, args.resolution, args.dimension)
    except (UnknownProblemError, ProblemDimensionError) as e:
        console.error(str(e))
        return EXIT_USAGE_ERROR
    except ValueError as e:
        console.error(f"Invalid reference request: {e}")
        return EXIT_USAGE_ERROR

    output = Path(args.out or f"{front.problem_name}_reference.{args.format}")
    write_front(front, output, args.format)
    if journal:
        journal.log_reference_written(front.problem_name, args.resolution, str(output))
    console.success(f"Reference front of {len(front)} points written to {output}")
    return EXIT_SUCCESS


def _add_problem_args(parser):
    parser.add_argument(
        "--problem",
        required=True,
        help=f"Benchmark problem ({', '.join(PROBLEM_NAMES)})",
    )
    parser.add_argument(
        "--dimension", type=int, help="Decision dimension for the ZDT problems"
    )
    parser.add_argument("--out", help="Output file path")
    parser.add_argument(
        "--format", choices=FRONT_FORMATS, default="csv", help="Output format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="MOSQP benchmark runner with low-order smooth penalty merit",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )

    # Global options
    parser.add_argument("--json", action="store_true", help="Output results in JSON format")
    parser.add_argument("-v", "--verbose", action="store_true", help="Enable verbose logging")
    parser.add_argument("-q", "--quiet", action="store_true", help="Only log errors")
    parser.add_argument("--config", help="Path to solver_config.yaml")
    parser.add_argument("--audit-log", help="Append run events to this JSONL journal")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # Run solver
    parser_run = subparsers.add_parser("run", help="Run MOSQP on a benchmark")
    _add_problem_args(parser_run)
    parser_run.add_argument("--seed", type=int, help="Seed for the initial point sample")
    parser_run.add_argument("--n-points", type=int, help="Initial point count N")
    parser_run.add_argument("--spreads", type=int, help="Spread rounds K")
    parser_run.add_argument("--k", type=float, help="Penalty exponent k")
    parser_run.add_argument("--b", type=float, help="Smoothing shape b")
    parser_run.add_argument("--sigma", type=float, help="Armijo fraction sigma")
    parser_run.add_argument("--growth", type=float, help="Penalty growth factor M")
    parser_run.add_argument("--backtrack", type=float, help="Step shrink factor A")
    parser_run.add_argument("--eps0", type=float, help="Initial smoothing width")
    parser_run.add_argument("--pi0", type=float, help="Initial penalty weight")
    parser_run.add_argument("--crowding-min", type=float, help="Crowding threshold c")
    parser_run.add_argument("--d-tol", type=float, help="Direction norm stop tolerance")
    parser_run.add_argument("--max-iters", type=int, help="Stage-2 iterations per point")
    parser_run.add_argument("--top-q", type=int, help="Keep the Q most isolated points")
    parser_run.add_argument(
        "--critical-tol", type=float, help="Criticality residual required for convergence"
    )
    parser_run.add_argument(
        "--bound-tol", type=float, help="Allowed excess of f_i over f_i(x_hat) in stage 2"
    )
    parser_run.add_argument(
        "--initial-out", help="Also write the initial point set here (format from suffix)"
    )
    parser_run.add_argument(
        "--spread-out", help="Also write the spread-stage point set here (format from suffix)"
    )
    parser_run.set_defaults(func=cmd_run)

    # Metrics
    parser_metrics = subparsers.add_parser("metrics", help="Compute front metrics")
    parser_metrics.add_argument("fronts", nargs="+", help="Front files (csv or json)")
    parser_metrics.add_argument("--reference", help="Reference front file")
    parser_metrics.add_argument(
        "--problem", help="Add the analytic front of this problem to the reference"
    )
    parser_metrics.add_argument(
        "--match-tol",
        type=float,
        default=DEFAULT_MATCH_TOL,
        help="Objective-space match tolerance for purity",
    )
    parser_metrics.add_argument(
        "--resolution",
        type=int,
        default=DEFAULT_REFERENCE_RESOLUTION,
        help="Points in the analytic reference front",
    )
    parser_metrics.add_argument("--report", help="Also write the reports as JSON here")
    parser_metrics.set_defaults(func=cmd_metrics)

    # Reference front
    parser_reference = subparsers.add_parser("reference", help="Write a reference front")
    _add_problem_args(parser_reference)
    parser_reference.add_argument(
        "--resolution",
        type=int,
        default=DEFAULT_REFERENCE_RESOLUTION,
        help="Grid points per axis (or along the analytic front)",
    )
    parser_reference.set_defaults(func=cmd_reference)

    return parser


def main(argv: Optional[List[str]] = None):
    """Main CLI entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Configure logging
    logging.basicConfig(level=DEFAULT_LOG_LEVEL, format=LOG_FORMAT, datefmt=LOG_DATE_FORMAT)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    elif args.quiet:
        logging.getLogger().setLevel(logging.ERROR)

    if not args.command:
        parser.print_help()
        return EXIT_USAGE_ERROR

    try:
        return args.func(args)
    except Exception as e:
        logger.exception(f"Unexpected failure in '{args.command}': {e}")
        return EXIT_SOLVER_FAILURE


if __name__ == "__main__":
    sys.exit(main())
