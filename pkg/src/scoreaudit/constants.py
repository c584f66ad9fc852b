"""This module defines constants used throughout the application."""

import os

# probability vectors
PROBABILITY_TOL = 1e-12

# quadrature
DEFAULT_HERMITE_NODES = 64
DEFAULT_LEGENDRE_NODES = 128
MIN_NODES = 8
WINDOW_SIGMAS = 12.0

# Monte-Carlo
DEFAULT_MC_SAMPLES = 100_000


def get_default_mc_samples() -> int:
    """Get the default Monte-Carlo sample count from environment or use default."""
    return int(os.environ.get("SCOREAUDIT_MC_SAMPLES", DEFAULT_MC_SAMPLES))


# certification
DEFAULT_ABS_TOL = 1e-9
DEFAULT_MARGIN_FACTOR = 3.0
MIN_MARGIN_FACTOR = 3.0
DEFAULT_LAMBDA_GRID = 101
MIN_LAMBDA_GRID = 11
DEFAULT_RANDOM_PAIRS = 200
DEFAULT_SUITE_SIZE = 30
SCAN_POINTS = 1000

# nesting limits
MAX_CONVEX_DEPTH = 8
MAX_AFFINE_DEPTH = 4

# near-Dirac NIG surrogate for m2 = infinity
NEAR_DIRAC_M2 = 1e6
NEAR_DIRAC_M3 = 1e3
NEAR_DIRAC_VARIANCE_TOL = 2e-3

# regression construction defaults (truncated Gaussians either side of mu*)
SPLIT_POINT = 0.0
SPLIT_OFFSET = 1.0
SPLIT_SIGMA = 0.3

DER_DEMO_LAMBDAS = (0.0, 0.1, 1.0)
NEIGHBOURHOOD_POINTS = 500

# task types
TASK_CLASSIFICATION = "classification"
TASK_REGRESSION = "regression"

# registry names
SECOND_ORDER_FAMILY_NAMES = ("dirichlet", "nig")
COUNTEREXAMPLE_CASES = ("classif-i", "classif-ii", "regress-i", "regress-ii", "der")

DEFAULT_OUTPUT_PREFIX = "scoreaudit-report"
CSV_FLOAT_FORMAT = ".17g"
