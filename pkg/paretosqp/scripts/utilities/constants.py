"""
Global constants for the MOSQP benchmark toolkit

This module centralizes default parameters, tolerances and file formats
so the solver, the metrics and the CLI agree on them.
"""

import os

# ============================================================================
# Benchmark experiment parameters
# ============================================================================

DEFAULT_K_EXP = 0.5
DEFAULT_B_SHAPE = 4.0
DEFAULT_SIGMA = 0.2
DEFAULT_PENALTY_GROWTH = 2.0
DEFAULT_BACKTRACK = 0.5
DEFAULT_SPREADS = 5

# Initial smoothing width and penalty weight
DEFAULT_EPS0 = 0.1
DEFAULT_PI0 = 1.0

DEFAULT_N_POINTS = 20
DEFAULT_SEED = int(os.getenv("MOSQP_DEFAULT_SEED", "42"))

# ============================================================================
# Solver tolerances and caps
# ============================================================================

DEFAULT_CROWDING_MIN = 1e-4
DEFAULT_D_TOL = 1e-6
# Converged points must also pass the Pareto-criticality check at this tolerance
DEFAULT_CRITICAL_TOL = 1e-4
# Stage-2 iterates keep f_i(x) <= f_i(x_hat) + DEFAULT_BOUND_TOL
DEFAULT_BOUND_TOL = 1e-6
DEFAULT_MAX_ITERS = 200
DEFAULT_MAX_BACKTRACKS = 30
DEFAULT_TOP_Q = 50
DEFAULT_FEAS_TOL = 1e-9
DEFAULT_OUTPUT_FEAS_TOL = 1e-6
DEFAULT_EPS_FLOOR = 1e-12
MAX_PENALTY_GROWTHS = 60
MAX_EPS_SHRINKS = 60

# Quasi-Newton safeguards
BFGS_CURVATURE_TOL = 1e-12
BFGS_MAX_CONDITION = 1e10

# Rejection sampling budget for feasible initial points
MAX_INIT_DRAWS = 100_000

# QP solver
QP_KKT_TOL = 1e-8
QP_RANK_TOL = 1e-10
QP_ITERATION_FACTOR = 50  # cap = factor * (n + r)

# ============================================================================
# Benchmark problems
# ============================================================================

PROBLEM_NAMES = ["problem1", "zdt1", "zdt2", "mop3"]
DEFAULT_ZDT_DIMENSION = int(os.getenv("MOSQP_ZDT_DIMENSION", "30"))
DEFAULT_REFERENCE_RESOLUTION = int(os.getenv("MOSQP_REFERENCE_RESOLUTION", "400"))

# ============================================================================
# Metrics
# ============================================================================

DEFAULT_MATCH_TOL = 1e-6
METRIC_DECIMALS = 4

# ============================================================================
# Persistence
# ============================================================================

FRONT_FORMATS = ["csv", "json"]
# 17 significant digits round-trips every IEEE double
FLOAT_FORMAT = "{:.17g}"
SIGN_MIN = "min"
SIGN_MAX = "max"

DEFAULT_CONFIG_FILENAMES = ["solver_config.yaml", "solver_config.yml", "solver_config.json"]

# ============================================================================
# CLI exit codes
# ============================================================================

EXIT_SUCCESS = 0
EXIT_USAGE_ERROR = 2
EXIT_SOLVER_FAILURE = 3

# ============================================================================
# Logging Configuration
# ============================================================================

LOG_LEVEL_DEBUG = "DEBUG"
LOG_LEVEL_INFO = "INFO"
LOG_LEVEL_WARNING = "WARNING"
LOG_LEVEL_ERROR = "ERROR"

DEFAULT_LOG_LEVEL = os.getenv("LOG_LEVEL", LOG_LEVEL_INFO)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
