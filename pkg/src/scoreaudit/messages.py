"""
This module provides constant messages used in the application for various scenarios.
"""

# argument errors
CATEGORICAL_SIZE_ERROR = "A categorical distribution needs at least 2 classes, got %d."
PROBABILITY_VECTOR_ERROR = (
    "Probabilities must be non-negative and sum to 1 within %g, got %s."
)
POSITIVE_PARAMETER_ERROR = "Parameter '%s' must be positive and finite, got %r."
FINITE_PARAMETER_ERROR = "Parameter '%s' must be finite, got %r."
TRUNCATION_BOUNDS_ERROR = "Truncation bounds must satisfy lo < hi, got (%r, %r)."
TRUNCATION_MASS_ERROR = "Truncation window (%r, %r) has no probability mass."
MIXTURE_SIZE_ERROR = "Mixture weights and components differ in length (%d vs %d)."
MIXTURE_EMPTY_ERROR = "A mixture needs at least one component."
MIXED_TASK_ERROR = "Cannot combine %s and %s distributions."
CLASS_INDEX_ERROR = "Class index %r is out of range for %d classes."
REGRESSION_ONLY_ERROR = "Operation requires a regression distribution, got %s."
CLASSIFICATION_ONLY_ERROR = "Operation requires a classification distribution, got %s."
NODE_COUNT_ERROR = "At least %d quadrature nodes are required, got %d."
DIRICHLET_DIMENSION_ERROR = "Dirichlet parameters differ in dimension (%d vs %d)."
NIG_PARAMETER_ERROR = "NIG parameters need m2 > 0, m3 >= 1 and m4 > 0, got %s."
LAMBDA_RANGE_ERROR = "Mixing weight lambda must lie in [0, 1], got %r."
NESTING_DEPTH_ERROR = "Nesting depth %d exceeds the limit of %d."
LAMBDA_GRID_ERROR = "Lambda grid must be sorted, inside [0, 1] and hold >= 3 points."
UNSUPPORTED_ARGUMENT_ERROR = "Loss '%s' cannot be evaluated at %s."
REGULARISATION_ERROR = "Regularisation weight lambda must be >= 0, got %r."
AFFINE_SCALE_ERROR = "Affine scale c must be positive, got %r."
POLYNOMIAL_DEGREE_ERROR = "Outcome shift g supports polynomials up to degree 2, got %d."
PROBE_CONFIG_ERROR = "Invalid probe configuration: %s."
MEAN_TASK_ERROR = "mean() is defined for regression distributions; use mean_prob()."
NO_QUADRATURE_RULE_ERROR = "No quadrature rule for %s; expand mixtures first."
AFFINE_COEFFICIENTS_ERROR = "Coefficients of g must be finite, got %s."
BAYES_KIND_ERROR = "Unknown Bayesian loss kind '%s'."
METHOD_NAME_ERROR = "Unknown evaluation method '%s'. Valid methods: %s."
MC_SAMPLES_ERROR = "Monte-Carlo needs at least 2 samples, got %d."
EXACT_PATH_ERROR = "The exact path needs a classification target; use quadrature or mc."
NEGATIVE_STDERR_ERROR = "Standard error must be non-negative, got %r."
DETERMINISTIC_STDERR_ERROR = "Method '%s' is deterministic; stderr must be 0."
TABLE_ROW_ERROR = "Table row has %d values for %d columns."
WITNESS_REQUIRED_ERROR = "A ViolationFound verdict needs a witness."
FAMILY_BOUNDS_ERROR = "Family '%s' needs %d parameter ranges."
EMPTY_RANGE_ERROR = "Empty parameter range (%r, %r)."
REVALIDATE_KIND_ERROR = "Cannot re-validate a '%s' witness."
SIDE_ERROR = "Side must be one of %s, got '%s'."
HALF_WIDTH_ERROR = "Neighbourhood half-width must be >= 0, got %r."
CENTRE_MEAN_ERROR = "p_tilde has mean %r, expected %r."
NEAR_DIRAC_ERROR = "Near-Dirac NIG variance %r misses %r."

# evaluation errors
NO_FINITE_MEAN_ERROR = "Distribution %s has no finite mean."
NONFINITE_NODE_ERROR = "Integrand is not finite at node %r."
NONFINITE_SAMPLE_ERROR = "Loss is not finite at sampled outcome %r."
INVALID_SCORE_ERROR = "Loss value %r is not a valid score."

# configuration errors
DESCRIPTOR_SYNTAX_ERROR = "Malformed descriptor '%s': %s."
MISSING_OPTION_ERROR = "Command '%s' requires option --%s."
SEED_REQUIRED_ERROR = "Monte-Carlo runs require an explicit --seed."
GRID_SYNTAX_ERROR = "Malformed grid '%s'; use 'a,b,c', 'start:stop:logN' or 'start:stop:xF'."
REPORT_EXISTS_ERROR = "Report '%s' already exists; pass --force to overwrite."
CONFIG_FILE_ERROR = "Config file '%s' could not be read: %s."
UNKNOWN_CONFIG_KEY = "unknown option '%s' for '%s'"
SWEEP_LOSS_ERROR = "Command 'sweep' needs a Bayesian loss, got '%s'."

# verdict notes
EVIDENCE_NOTE = (
    "NoViolationFound is evidence from the probes run, not a proof of propriety."
)
STRICTNESS_NOTE = (
    "Equal-marginal predictions %s and %s receive identical scores under every "
    "target; strict propriety is impossible."
)
THRESHOLD_TENSION_NOTE = (
    "The loss lowers L2(Q(m), y2) and raises L2(Q(m), y1) as m grows, yet the "
    "threshold condition m < T(m) fails at every scanned m; the construction "
    "does not apply to this loss and no violation is asserted."
)
INFINITE_EXCLUDED_NOTE = "%d probe(s) excluded because a loss value was infinite."
NONFINITE_GAP_NOTE = "%d probe(s) skipped because the gap was not finite."
UNSUPPORTED_PREDICTION_NOTE = "Loss '%s' cannot be evaluated at %s."
QUADRATURE_FAILED_NOTE = "Quadrature failed: %s"

# run results
REPORT_WRITTEN = "Report written: %s"
CURVE_WRITTEN = "Curve data written: %s"
SELFTEST_SUCCESSFUL = "Selftest: all invariants hold!"
SELFTEST_FAILED = "Selftest: %d invariant(s) failed!"
