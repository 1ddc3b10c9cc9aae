"""
Run journal for benchmark executions

Every solver run, metric computation and reference export is appended to a
JSONL file as one event. Events of the same solver run share a run_id, and
run_started / reference_written / metrics_computed events also record the
git commit of the working tree, so a front file can be traced back to the
code and parameters that produced it.
"""

import json
import logging
import os
import subprocess
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

logger = logging.getLogger(__name__)


class AuditEventType:
    """Journal event types"""

    RUN_STARTED = "run_started"
    SPREAD_COMPLETED = "spread_completed"
    PARETO_COMPLETED = "pareto_completed"
    RUN_COMPLETED = "run_completed"
    RUN_FAILED = "run_failed"

    METRICS_COMPUTED = "metrics_computed"
    REFERENCE_WRITTEN = "reference_written"


def _git(*args: str) -> Optional[str]:
    try:
        out = subprocess.check_output(["git", *args], stderr=subprocess.DEVNULL)
    except (OSError, subprocess.CalledProcessError):
        return None
    return out.decode().strip() or None


def git_context() -> Dict[str, str]:
    """Commit, branch and author of the current checkout ('unknown' outside git)"""
    return {
        "git_commit": _git("rev-parse", "HEAD") or "unknown",
        "git_branch": _git("rev-parse", "--abbrev-ref", "HEAD") or "unknown",
        "git_user": _git("config", "user.email") or os.getenv("USER", "unknown"),
    }


class AuditLogger:
    """
    Append-only JSONL journal of solver activity

    Usage:
        journal = AuditLogger(Path("runs/journal.jsonl"))
        run_id = journal.log_run_start("zdt1", config.to_dict())
        journal.log_spread_completion(run_id, "zdt1", 20, 180)
        journal.log_pareto_completion(run_id, "zdt1", 48, 45)
        journal.log_run_completion(run_id, "zdt1", 48, 45, "front.csv", counters)
    """

    def __init__(self, audit_file: Path, auto_create_dirs: bool = True):
        """
        Args:
            audit_file: Journal path (JSONL)
            auto_create_dirs: Create the parent directory when missing
        """
        self.audit_file = Path(audit_file)
        if auto_create_dirs:
            self.audit_file.parent.mkdir(parents=True, exist_ok=True)
        logger.debug(f"Run journal: {self.audit_file}")

    def _append(self, event_type: str, payload: Dict[str, Any], with_git: bool = False):
        record = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "event_type": event_type,
            **payload,
        }
        if with_git:
            record.update(git_context())
        with open(self.audit_file, "a") as f:
            f.write(json.dumps(record, default=str) + "\n")
        logger.debug(f"Journal event {event_type} for {payload.get('problem', '-')}")

    # Solver runs

    def log_run_start(self, problem: str, config: Dict[str, Any]) -> str:
        """Record a new run and return its run_id"""
        run_id = uuid.uuid4().hex[:12]
        self._append(
            AuditEventType.RUN_STARTED,
            {"run_id": run_id, "problem": problem, "config": config},
            with_git=True,
        )
        return run_id

    def log_spread_completion(
        self, run_id: str, problem: str, start_points: int, spread_points: int
    ):
        self._append(
            AuditEventType.SPREAD_COMPLETED,
            {
                "run_id": run_id,
                "problem": problem,
                "start_points": start_points,
                "spread_points": spread_points,
            },
        )

    def log_pareto_completion(self, run_id: str, problem: str, front_size: int, converged: int):
        self._append(
            AuditEventType.PARETO_COMPLETED,
            {"run_id": run_id, "problem": problem, "front_size": front_size, "converged": converged},
        )

    def log_run_completion(
        self,
        run_id: str,
        problem: str,
        front_size: int,
        converged: int,
        output: str,
        counters: Optional[Dict[str, int]] = None,
    ):
        self._append(
            AuditEventType.RUN_COMPLETED,
            {
                "run_id": run_id,
                "problem": problem,
                "front_size": front_size,
                "converged": converged,
                "output": output,
                "counters": counters or {},
            },
        )

    def log_run_failure(self, run_id: str, problem: str, error: str):
        self._append(
            AuditEventType.RUN_FAILED, {"run_id": run_id, "problem": problem, "error": error}
        )

    # Metrics and references

    def log_metrics(self, reports: List[Dict[str, Any]], reference: str):
        self._append(
            AuditEventType.METRICS_COMPUTED,
            {"reference": reference, "reports": reports},
            with_git=True,
        )

    def log_reference_written(self, problem: str, resolution: int, output: str):
        self._append(
            AuditEventType.REFERENCE_WRITTEN,
            {"problem": problem, "resolution": resolution, "output": output},
            with_git=True,
        )

    # Reading

    def _records(self) -> Iterator[Dict[str, Any]]:
        if not self.audit_file.exists():
            return
        with open(self.audit_file) as f:
            for line_no, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    yield json.loads(line)
                except json.JSONDecodeError:
                    logger.warning(f"{self.audit_file}:{line_no}: skipping malformed journal line")

    def read_events(
        self,
        event_type: Optional[str] = None,
        problem: Optional[str] = None,
        run_id: Optional[str] = None,
    ) -> List[Dict[str, Any]]:
        """Journal events in file order, optionally filtered"""
        wanted = {"event_type": event_type, "problem": problem, "run_id": run_id}
        return [
            record
            for record in self._records()
            if all(value is None or record.get(key) == value for key, value in wanted.items())
        ]

    def run_history(self, run_id: str) -> List[str]:
        """Event types recorded for one run, in order"""
        return [record["event_type"] for record in self.read_events(run_id=run_id)]
