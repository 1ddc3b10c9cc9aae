"""
Pytest configuration and fixtures for the paretosqp tests
"""

import tempfile
from pathlib import Path

import numpy as np
import pytest

from paretosqp.scripts.utilities.mosqp_solver import SolverConfig
from paretosqp.scripts.utilities.problems import (
    make_mop3,
    make_problem1,
    make_zdt1,
    make_zdt2,
)


def central_difference(func, x, step=1e-6):
    """Central finite-difference gradient (scalar func) or Jacobian (vector func)"""
    x = np.asarray(x, dtype=float)
    base = np.asarray(func(x), dtype=float)
    columns = []
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        columns.append(
            (np.asarray(func(x + e), dtype=float) - np.asarray(func(x - e), dtype=float))
            / (2 * step)
        )
    jac = np.stack(columns, axis=-1)
    return jac if base.ndim else jac.reshape(x.size)


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests"""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def rng():
    """Seeded generator so random test cases are reproducible"""
    return np.random.default_rng(20240611)


@pytest.fixture
def problem1():
    return make_problem1()


@pytest.fixture
def zdt1_small():
    return make_zdt1(5)


@pytest.fixture
def zdt2_small():
    return make_zdt2(5)


@pytest.fixture
def mop3():
    return make_mop3()


@pytest.fixture
def small_config():
    """Cheap solver settings for unit-level stage runs"""
    return SolverConfig(n_points=5, spreads=1, max_iters=30, seed=3)


@pytest.fixture(autouse=True)
def serial_pareto(monkeypatch):
    """Keep the Pareto stage single-threaded unless a test opts in"""
    monkeypatch.delenv("FEATURE_PARALLEL_PARETO", raising=False)
    monkeypatch.delenv("PARETO_WORKERS", raising=False)


@pytest.fixture
def finite_difference():
    """Expose central_difference to tests as a fixture"""
    return central_difference
