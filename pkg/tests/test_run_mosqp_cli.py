"""
Tests for the run_mosqp command-line interface
"""

import json

import pytest

from paretosqp.scripts import run_mosqp
from paretosqp.scripts.utilities.audit_logger import AuditEventType, AuditLogger
from paretosqp.scripts.utilities.constants import (
    EXIT_SOLVER_FAILURE,
    EXIT_SUCCESS,
    EXIT_USAGE_ERROR,
)
from paretosqp.scripts.utilities.front_io import read_front
from paretosqp.scripts.utilities.mosqp_solver import InitializationError

SMALL_RUN = ["--n-points", "4", "--spreads", "1", "--max-iters", "20", "--seed", "3"]


@pytest.fixture(autouse=True)
def isolated_cwd(temp_dir, monkeypatch):
    """Run from an empty directory so no solver_config.yaml is discovered"""
    monkeypatch.chdir(temp_dir)


def _run(temp_dir, name, *extra):
    out = temp_dir / name
    code = run_mosqp.main(["run", "--problem", "problem1", *SMALL_RUN, "--out", str(out), *extra])
    return code, out


class TestRunCommand:
    """Test suite for the run command"""

    def test_writes_front(self, temp_dir):
        """Test a small Problem1 run writes a readable front"""
        code, out = _run(temp_dir, "front.csv")
        assert code == EXIT_SUCCESS
        front = read_front(out)
        assert len(front) > 0
        assert front.problem_name == "problem1"

    def test_runs_are_byte_identical(self, temp_dir):
        """Test identical flags and seed reproduce the file exactly"""
        _run(temp_dir, "a.csv")
        _run(temp_dir, "b.csv")
        assert (temp_dir / "a.csv").read_bytes() == (temp_dir / "b.csv").read_bytes()

    def test_json_summary(self, temp_dir, capsys):
        """Test --json prints a machine-readable summary"""
        out = temp_dir / "front.json"
        code = run_mosqp.main(
            ["--json", "run", "--problem", "problem1", *SMALL_RUN, "--out", str(out), "--format", "json"]
        )
        assert code == EXIT_SUCCESS
        summaries = [
            json.loads(line)
            for line in capsys.readouterr().out.splitlines()
            if '"front_size"' in line
        ]
        assert summaries[0]["problem"] == "problem1"
        assert summaries[0]["objective_evaluations"] > 0
        assert json.loads(out.read_text())["counters"]["objective_evaluations"] > 0

    def test_unknown_problem(self, temp_dir, capsys):
        """Test an unknown benchmark is a usage error"""
        code = run_mosqp.main(["run", "--problem", "dtlz2", "--out", str(temp_dir / "x.csv")])
        assert code == EXIT_USAGE_ERROR
        assert "dtlz2" in capsys.readouterr().err

    def test_invalid_parameter(self, temp_dir):
        """Test out-of-range solver options are usage errors"""
        code, out = _run(temp_dir, "front.csv", "--sigma", "2")
        assert code == EXIT_USAGE_ERROR
        assert not out.exists()

    def test_config_file_overrides(self, temp_dir):
        """Test --config values apply and flags still win"""
        config = temp_dir / "custom.yaml"
        config.write_text("solver:\n  n_points: 0\n")
        code = run_mosqp.main(
            [
                "--config", str(config),
                "run", "--problem", "problem1", *SMALL_RUN,
                "--out", str(temp_dir / "x.csv"),
            ]
        )
        assert code == EXIT_SUCCESS

        code = run_mosqp.main(
            ["--config", str(config), "run", "--problem", "problem1", "--out", str(temp_dir / "y.csv")]
        )
        assert code == EXIT_USAGE_ERROR

    def test_writes_initial_and_spread_sets(self, temp_dir):
        """Test the initial and spread point sets are written next to the front"""
        code, _ = _run(
            temp_dir,
            "front.csv",
            "--initial-out", str(temp_dir / "trace" / "initial.csv"),
            "--spread-out", str(temp_dir / "trace" / "spread.json"),
        )
        assert code == EXIT_SUCCESS

        initial = read_front(temp_dir / "trace" / "initial.csv")
        spread = read_front(temp_dir / "trace" / "spread.json")
        assert len(initial) == 4
        assert initial.n == 2
        assert all(x @ x <= 0.5 for x in initial.decisions)
        assert len(spread) >= 1
        assert spread.problem_name == "problem1"

    def test_point_set_output_needs_known_suffix(self, temp_dir):
        """Test an unsupported point-set suffix is a usage error before solving"""
        code, out = _run(temp_dir, "front.csv", "--spread-out", str(temp_dir / "spread.txt"))
        assert code == EXIT_USAGE_ERROR
        assert not out.exists()

    def test_initialization_failure(self, temp_dir, mocker):
        """Test InitializationError exits 3 and is journaled"""
        mocker.patch.object(
            run_mosqp, "initialize_points", side_effect=InitializationError("too tight")
        )
        journal = temp_dir / "journal.jsonl"
        code = run_mosqp.main(
            ["--audit-log", str(journal), "run", "--problem", "problem1", *SMALL_RUN]
        )
        assert code == EXIT_SOLVER_FAILURE
        events = AuditLogger(journal).read_events(AuditEventType.RUN_FAILED)
        assert events[0]["error"] == "too tight"

    def test_journal_records_completed_run(self, temp_dir):
        """Test a successful run journals start, both stages and completion"""
        journal = temp_dir / "journal.jsonl"
        run_mosqp.main(
            [
                "--audit-log", str(journal),
                "run", "--problem", "problem1", *SMALL_RUN,
                "--out", str(temp_dir / "front.csv"),
            ]
        )
        events = AuditLogger(journal).read_events()
        assert len({e["run_id"] for e in events}) == 1
        types = [e["event_type"] for e in events]
        assert types == [
            AuditEventType.RUN_STARTED,
            AuditEventType.SPREAD_COMPLETED,
            AuditEventType.PARETO_COMPLETED,
            AuditEventType.RUN_COMPLETED,
        ]


class TestReferenceCommand:
    """Test suite for the reference command"""

    def test_writes_analytic_front(self, temp_dir):
        """Test the ZDT1 reference lands at the requested path"""
        out = temp_dir / "zdt1_ref.csv"
        code = run_mosqp.main(
            ["reference", "--problem", "zdt1", "--dimension", "5", "--resolution", "11", "--out", str(out)]
        )
        assert code == EXIT_SUCCESS
        front = read_front(out)
        assert len(front) == 11
        assert front.n == 5

    def test_default_output_name(self, temp_dir):
        """Test the output defaults to <problem>_reference.<format>"""
        code = run_mosqp.main(["reference", "--problem", "zdt2", "--resolution", "5"])
        assert code == EXIT_SUCCESS
        assert (temp_dir / "zdt2_reference.csv").exists()

    @pytest.mark.parametrize(
        "argv",
        [
            ["reference", "--problem", "nope"],
            ["reference", "--problem", "zdt1", "--resolution", "1"],
        ],
    )
    def test_usage_errors(self, argv):
        """Test bad problems and resolutions exit 2"""
        assert run_mosqp.main(argv) == EXIT_USAGE_ERROR


class TestMetricsCommand:
    """Test suite for the metrics command"""

    @pytest.fixture
    def zdt1_reference(self, temp_dir):
        out = temp_dir / "zdt1_ref.csv"
        run_mosqp.main(
            ["reference", "--problem", "zdt1", "--dimension", "5", "--resolution", "11", "--out", str(out)]
        )
        return out

    def test_front_against_itself(self, zdt1_reference, temp_dir):
        """Test a front measured against itself has purity 1"""
        report = temp_dir / "report.json"
        code = run_mosqp.main(
            [
                "metrics", str(zdt1_reference),
                "--reference", str(zdt1_reference),
                "--report", str(report),
            ]
        )
        assert code == EXIT_SUCCESS
        rows = json.loads(report.read_text())
        assert rows[0]["label"] == "zdt1_ref.csv"
        assert rows[0]["purity"] == 1.0
        assert rows[0]["front_size"] == 11

    def test_combined_reference_with_analytic_front(self, zdt1_reference, capsys):
        """Test without --reference the analytic ZDT front joins the pool"""
        code = run_mosqp.main(["metrics", str(zdt1_reference), "--resolution", "21"])
        assert code == EXIT_SUCCESS
        assert "combined (2 fronts)" in capsys.readouterr().out

    def test_parse_error_names_file(self, temp_dir, capsys):
        """Test malformed front files exit 2 with the path in the message"""
        bad = temp_dir / "bad.csv"
        bad.write_text("f1,f2\n1,oops\n")
        assert run_mosqp.main(["metrics", str(bad)]) == EXIT_USAGE_ERROR
        assert "bad.csv:2" in capsys.readouterr().err

    def test_empty_front_file(self, temp_dir):
        """Test a front with no points is a usage error"""
        empty = temp_dir / "empty.csv"
        empty.write_text("# problem=zdt1\nf1,f2\n")
        assert run_mosqp.main(["metrics", str(empty)]) == EXIT_USAGE_ERROR

    def test_missing_file(self, temp_dir):
        """Test a missing front file exits 2"""
        assert run_mosqp.main(["metrics", str(temp_dir / "none.csv")]) == EXIT_USAGE_ERROR


def test_no_command_prints_help(capsys):
    """Test running without a subcommand is a usage error"""
    assert run_mosqp.main([]) == EXIT_USAGE_ERROR
    assert "usage" in capsys.readouterr().out
