"""
First-order distributions on outcomes, first-order losses and the expected
first-order score S1.

Classification outcomes are class indices ``0..K-1``; regression outcomes are
real numbers. All distribution values are immutable.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special, stats

from . import console
from .constants import (
    DEFAULT_HERMITE_NODES,
    DEFAULT_LEGENDRE_NODES,
    MIN_NODES,
    PROBABILITY_TOL,
    TASK_CLASSIFICATION,
    TASK_REGRESSION,
    WINDOW_SIGMAS,
)
from .exceptions import (
    EvaluationException,
    InvalidArgumentException,
    UnknownNameException,
)
from .messages import (
    CATEGORICAL_SIZE_ERROR,
    CLASS_INDEX_ERROR,
    CLASSIFICATION_ONLY_ERROR,
    FINITE_PARAMETER_ERROR,
    MEAN_TASK_ERROR,
    MIXED_TASK_ERROR,
    MIXTURE_EMPTY_ERROR,
    MIXTURE_SIZE_ERROR,
    NO_FINITE_MEAN_ERROR,
    NO_QUADRATURE_RULE_ERROR,
    NODE_COUNT_ERROR,
    NONFINITE_NODE_ERROR,
    POSITIVE_PARAMETER_ERROR,
    PROBABILITY_VECTOR_ERROR,
    TRUNCATION_BOUNDS_ERROR,
    TRUNCATION_MASS_ERROR,
)
from .values import METHOD_EXACT, ScoreValue, quadrature_tag


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise InvalidArgumentException(POSITIVE_PARAMETER_ERROR % (name, value))
    return value


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidArgumentException(FINITE_PARAMETER_ERROR % (name, value))
    return value


def check_probability_vector(values: Sequence[float]) -> Tuple[float, ...]:
    """
    Validate a probability vector.

    Args:
        values (Sequence[float]): Candidate probabilities.

    Returns:
        Tuple[float, ...]: The probabilities as a tuple of floats.

    Raises:
        InvalidArgumentException: If an entry is negative or not finite, or if
            the entries do not sum to 1 within ``PROBABILITY_TOL``.
    """
    probs = tuple(float(v) for v in values)
    valid = all(math.isfinite(v) and v >= 0 for v in probs)
    if not valid or abs(math.fsum(probs) - 1.0) > PROBABILITY_TOL:
        raise InvalidArgumentException(
            PROBABILITY_VECTOR_ERROR % (PROBABILITY_TOL, probs)
        )
    return probs


@dataclass(frozen=True)
class Categorical:
    """Categorical distribution over the classes ``0..K-1``."""

    probs: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.probs) < 2:
            raise InvalidArgumentException(CATEGORICAL_SIZE_ERROR % len(self.probs))
        object.__setattr__(self, "probs", check_probability_vector(self.probs))

    @property
    def k(self) -> int:
        """Number of classes."""
        return len(self.probs)

    def as_array(self) -> np.ndarray:
        """Return the probabilities as a numpy array."""
        return np.asarray(self.probs, dtype=float)


@dataclass(frozen=True)
class GaussianDist:
    """Gaussian distribution ``N(mu, sigma^2)``."""

    mu: float
    sigma: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", _check_finite("mu", self.mu))
        object.__setattr__(self, "sigma", _check_positive("sigma", self.sigma))


@dataclass(frozen=True)
class StudentTDist:
    """Location-scale Student-t distribution."""

    loc: float
    scale: float
    dof: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "loc", _check_finite("loc", self.loc))
        object.__setattr__(self, "scale", _check_positive("scale", self.scale))
        object.__setattr__(self, "dof", _check_positive("dof", self.dof))


@dataclass(frozen=True)
class TruncatedGaussian:
    """Gaussian ``N(mu, sigma^2)`` conditioned on the open interval ``(lo, hi)``."""

    mu: float
    sigma: float
    lo: float = -math.inf
    hi: float = math.inf

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", _check_finite("mu", self.mu))
        object.__setattr__(self, "sigma", _check_positive("sigma", self.sigma))
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi) or not lo < hi:
            raise InvalidArgumentException(TRUNCATION_BOUNDS_ERROR % (lo, hi))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if self.mass <= 0:
            raise InvalidArgumentException(TRUNCATION_MASS_ERROR % (lo, hi))

    @property
    def a(self) -> float:
        """Standardised lower bound."""
        return (self.lo - self.mu) / self.sigma

    @property
    def b(self) -> float:
        """Standardised upper bound."""
        return (self.hi - self.mu) / self.sigma

    @property
    def mass(self) -> float:
        """Mass of the untruncated Gaussian inside ``(lo, hi)``."""
        if self.a > 0:
            # upper tail, where ndtr(b) - ndtr(a) cancels
            return float(special.ndtr(-self.a) - special.ndtr(-self.b))
        return float(special.ndtr(self.b) - special.ndtr(self.a))

    def frozen(self):  # type: ignore[no-untyped-def]
        """Return the equivalent frozen ``scipy.stats.truncnorm``."""
        return stats.truncnorm(self.a, self.b, loc=self.mu, scale=self.sigma)


@dataclass(frozen=True)
class FiniteMixture:
    """Finite mixture of first-order distributions of one task type."""

    weights: Tuple[float, ...]
    components: Tuple["FirstOrderDist", ...]

    def __post_init__(self) -> None:
        components = tuple(self.components)
        if not components:
            raise InvalidArgumentException(MIXTURE_EMPTY_ERROR)
        if len(self.weights) != len(components):
            raise InvalidArgumentException(
                MIXTURE_SIZE_ERROR % (len(self.weights), len(components))
            )
        object.__setattr__(self, "weights", check_probability_vector(self.weights))
        object.__setattr__(self, "components", components)
        first = describe_task(components[0])
        for component in components[1:]:
            if describe_task(component) != first:
                raise InvalidArgumentException(
                    MIXED_TASK_ERROR % (first, describe_task(component))
                )


FirstOrderDist = Union[
    Categorical, GaussianDist, StudentTDist, TruncatedGaussian, FiniteMixture
]


def task_of(p: FirstOrderDist) -> str:
    """
    Return the task type of a first-order distribution.

    Args:
        p (FirstOrderDist): The distribution.

    Returns:
        str: ``classification`` or ``regression``.
    """
    if isinstance(p, Categorical):
        return TASK_CLASSIFICATION
    if isinstance(p, FiniteMixture):
        return task_of(p.components[0])
    return TASK_REGRESSION


def num_classes(p: FirstOrderDist) -> Optional[int]:
    """Number of classes of a classification distribution, else None."""
    if isinstance(p, Categorical):
        return p.k
    if isinstance(p, FiniteMixture):
        return num_classes(p.components[0])
    return None


def describe_task(p: FirstOrderDist) -> str:
    """Task type including the class count, e.g. ``classification(K=3)``."""
    k = num_classes(p)
    if k is None:
        return TASK_REGRESSION
    return f"{TASK_CLASSIFICATION}(K={k})"


def collapse(p: FirstOrderDist) -> FirstOrderDist:
    """
    Collapse a mixture of categoricals into a single categorical.

    Other distributions are returned unchanged.

    Args:
        p (FirstOrderDist): The distribution.

    Returns:
        FirstOrderDist: The collapsed distribution.
    """
    if not (isinstance(p, FiniteMixture) and task_of(p) == TASK_CLASSIFICATION):
        return p

    total = np.zeros(num_classes(p) or 0)
    for weight, component in zip(p.weights, p.components):
        if weight > 0:
            total += weight * collapse(component).as_array()  # type: ignore[union-attr]
    return Categorical(tuple(total / total.sum()))


def check_class_index(y: Union[int, float], k: int) -> int:
    """
    Validate a class index against a class count.

    Args:
        y (Union[int, float]): The candidate index; integral floats are accepted.
        k (int): Number of classes.

    Returns:
        int: The index.

    Raises:
        InvalidArgumentException: If ``y`` is not an integer in ``[0, k)``.
    """
    try:
        index = int(y)
    except (TypeError, ValueError, OverflowError):
        raise InvalidArgumentException(CLASS_INDEX_ERROR % (y, k)) from None
    if index != y or not 0 <= index < k:
        raise InvalidArgumentException(CLASS_INDEX_ERROR % (y, k))
    return index


def _as_categorical(p: FirstOrderDist) -> Categorical:
    p = collapse(p)
    if not isinstance(p, Categorical):
        raise InvalidArgumentException(CLASSIFICATION_ONLY_ERROR % type(p).__name__)
    return p


def brier_loss(p: Categorical, y: int) -> float:
    """
    Brier loss ``sum_k (p_k - 1{k=y})^2``.

    Args:
        p (Categorical): The predicted distribution.
        y (int): The observed class index.

    Returns:
        float: The loss, a value in ``[0, 2]``.

    Raises:
        InvalidArgumentException: If ``y`` is not a valid class index.
    """
    p = _as_categorical(p)
    index = check_class_index(y, p.k)
    return math.fsum(
        (prob - (1.0 if k == index else 0.0)) ** 2 for k, prob in enumerate(p.probs)
    )


def ce_loss(p: Categorical, y: int) -> float:
    """
    Cross-entropy loss ``-log p_y``; ``+inf`` when ``p_y = 0``.

    Args:
        p (Categorical): The predicted distribution.
        y (int): The observed class index.

    Returns:
        float: The loss.

    Raises:
        InvalidArgumentException: If ``y`` is not a valid class index.
    """
    p = _as_categorical(p)
    prob = p.probs[check_class_index(y, p.k)]
    if prob == 0:
        return math.inf
    return -math.log(prob)


def linear_loss(p: Categorical, y: int) -> float:
    """Linear loss ``1 - p_y`` (improper as a first-order score)."""
    p = _as_categorical(p)
    return 1.0 - p.probs[check_class_index(y, p.k)]


def squared_loss(p: FirstOrderDist, y):  # type: ignore[no-untyped-def]
    """
    Squared error of the distribution mean, ``(E(p) - y)^2``.

    Accepts scalar or array outcomes.
    """
    return (mean(p) - y) ** 2


FirstOrderLoss = Callable[..., float]

FIRST_ORDER_LOSSES = {
    "brier": brier_loss,
    "ce": ce_loss,
    "linear": linear_loss,
    "squared": squared_loss,
}


def get_first_order_loss(name: str) -> FirstOrderLoss:
    """
    Look up a registered first-order loss.

    Args:
        name (str): One of ``brier``, ``ce``, ``linear``, ``squared``.

    Returns:
        FirstOrderLoss: The loss function ``(p_hat, y) -> float``.

    Raises:
        UnknownNameException: If the name is not registered.
    """
    try:
        return FIRST_ORDER_LOSSES[name]
    except KeyError:
        raise UnknownNameException(
            "first-order loss", name, FIRST_ORDER_LOSSES
        ) from None


def mean(p: FirstOrderDist) -> float:
    """
    Expectation of a regression distribution.

    Args:
        p (FirstOrderDist): A regression distribution.

    Returns:
        float: Its mean.

    Raises:
        InvalidArgumentException: For categorical distributions (use
            ``mean_prob``).
        EvaluationException: If the distribution has no finite mean.
    """
    if isinstance(p, GaussianDist):
        return p.mu
    if isinstance(p, StudentTDist):
        if p.dof <= 1:
            raise EvaluationException(NO_FINITE_MEAN_ERROR % (p,))
        return p.loc
    if isinstance(p, TruncatedGaussian):
        return float(p.frozen().mean())
    if isinstance(p, FiniteMixture) and task_of(p) == TASK_REGRESSION:
        return math.fsum(
            w * mean(c) for w, c in zip(p.weights, p.components) if w > 0
        )
    raise InvalidArgumentException(MEAN_TASK_ERROR)


def mean_prob(p: FirstOrderDist, y: int) -> float:
    """
    Probability of class ``y``.

    Args:
        p (FirstOrderDist): A classification distribution.
        y (int): The class index.

    Returns:
        float: ``p_y``.
    """
    p = _as_categorical(p)
    return p.probs[check_class_index(y, p.k)]


@lru_cache(maxsize=None)
def _hermite_rule(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.hermite.hermgauss(nodes)
    return x, w / math.sqrt(math.pi)


@lru_cache(maxsize=None)
def _legendre_rule(nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(nodes)


def _interval_rule(
    lo: float, hi: float, nodes: int
) -> Tuple[np.ndarray, np.ndarray]:
    x, w = _legendre_rule(nodes)
    half = 0.5 * (hi - lo)
    return half * x + 0.5 * (hi + lo), half * w


def _tangent_rule(
    loc: float,
    scale: float,
    pdf: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    nodes: int,
) -> Tuple[np.ndarray, np.ndarray]:
    # y = loc + scale * tan(theta) maps (-pi/2, pi/2) onto the real line
    t_lo = math.atan((lo - loc) / scale) if math.isfinite(lo) else -math.pi / 2
    t_hi = math.atan((hi - loc) / scale) if math.isfinite(hi) else math.pi / 2
    theta, w = _interval_rule(t_lo, t_hi, nodes)
    points = loc + scale * np.tan(theta)
    weights = w * pdf(points) * scale / np.cos(theta) ** 2
    return points, weights


def _window(p: TruncatedGaussian) -> Tuple[float, float]:
    center, spread = (float(v) for v in p.frozen().stats(moments="mv"))
    spread = math.sqrt(spread)
    return (
        max(p.lo, center - WINDOW_SIGMAS * spread),
        min(p.hi, center + WINDOW_SIGMAS * spread),
    )


def default_nodes(p: FirstOrderDist) -> int:
    """Default quadrature node count for a distribution family."""
    if isinstance(p, GaussianDist):
        return DEFAULT_HERMITE_NODES
    if isinstance(p, FiniteMixture):
        return max(default_nodes(c) for c in p.components)
    return DEFAULT_LEGENDRE_NODES


def quadrature_rule(
    p: FirstOrderDist,
    nodes: Optional[int] = None,
    lo: float = -math.inf,
    hi: float = math.inf,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadrature points and weights for expectations under ``p`` on ``[lo, hi]``.

    Gaussians use Gauss-Hermite nodes on the full line; Student-t uses
    Gauss-Legendre nodes on ``theta`` with ``y = loc + scale * tan(theta)``;
    truncated Gaussians use Gauss-Legendre nodes on a 12-sigma window clipped
    to the support. Full-line weights are normalised to sum to 1.

    Args:
        p (FirstOrderDist): A regression distribution (not a mixture).
        nodes (Optional[int]): Node count, defaulting per family.
        lo (float): Lower integration bound.
        hi (float): Upper integration bound.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Points and weights.
    """
    nodes = nodes or default_nodes(p)
    full = lo == -math.inf and hi == math.inf

    if isinstance(p, GaussianDist):
        if full:
            x, w = _hermite_rule(nodes)
            return p.mu + math.sqrt(2.0) * p.sigma * x, w

        def pdf(y: np.ndarray) -> np.ndarray:
            return stats.norm.pdf(y, loc=p.mu, scale=p.sigma)

        return _tangent_rule(p.mu, p.sigma, pdf, lo, hi, nodes)

    if isinstance(p, StudentTDist):

        def pdf(y: np.ndarray) -> np.ndarray:
            return stats.t.pdf(y, p.dof, loc=p.loc, scale=p.scale)

        points, weights = _tangent_rule(p.loc, p.scale, pdf, lo, hi, nodes)
        if full:
            weights = weights / weights.sum()
        return points, weights

    if isinstance(p, TruncatedGaussian):
        w_lo, w_hi = _window(p)
        a, b = max(lo, w_lo), min(hi, w_hi)
        if not a < b:
            return np.zeros(0), np.zeros(0)
        points, weights = _interval_rule(a, b, nodes)
        weights = weights * p.frozen().pdf(points)
        if full:
            weights = weights / weights.sum()
        return points, weights

    raise InvalidArgumentException(NO_QUADRATURE_RULE_ERROR % type(p).__name__)


def _evaluate(
    f: Callable, points: np.ndarray, vectorized: bool
) -> np.ndarray:
    if vectorized:
        return np.broadcast_to(np.asarray(f(points), dtype=float), points.shape)
    return np.array([f(point) for point in points.tolist()], dtype=float)


def _check_nodes(nodes: Optional[int]) -> None:
    if nodes is not None and nodes < MIN_NODES:
        raise InvalidArgumentException(NODE_COUNT_ERROR % (MIN_NODES, nodes))


def _categorical_sum(
    p: Categorical, f: Callable, lo: float, hi: float, vectorized: bool
) -> float:
    classes = np.array(
        [k for k, prob in enumerate(p.probs) if prob > 0 and lo <= k <= hi],
        dtype=int,
    )
    if classes.size == 0:
        return 0.0
    values = _evaluate(f, classes, vectorized)

    total = 0.0
    for k, value in zip(classes.tolist(), values.tolist()):
        if math.isnan(value) or value == -math.inf:
            raise EvaluationException(NONFINITE_NODE_ERROR % k, node=k)
        total += p.probs[k] * value
    return total


def expect_fn_on(
    p: FirstOrderDist,
    f: Callable,
    lo: float = -math.inf,
    hi: float = math.inf,
    nodes: Optional[int] = None,
    vectorized: bool = False,
) -> float:
    """
    Restricted expectation ``E_{Y~p}[f(Y) 1{lo <= Y <= hi}]``.

    Categorical distributions are summed exactly over their positive-mass
    classes; a ``+inf`` value at such a class gives ``+inf``. Continuous
    families use quadrature; any non-finite value at a node with positive
    weight is reported as an evaluation error carrying that node.

    Args:
        p (FirstOrderDist): The distribution of ``Y``.
        f (Callable): The integrand; receives one outcome at a time, or the
            whole node array when ``vectorized`` is True.
        lo (float): Lower bound of the integration range.
        hi (float): Upper bound of the integration range.
        nodes (Optional[int]): Quadrature node count, at least 8.
        vectorized (bool): Whether ``f`` accepts numpy arrays.

    Returns:
        float: The restricted expectation.

    Raises:
        EvaluationException: If the integrand is not finite at a node.
    """
    _check_nodes(nodes)

    if isinstance(p, Categorical):
        return _categorical_sum(p, f, lo, hi, vectorized)

    if isinstance(p, FiniteMixture):
        total = 0.0
        for weight, component in zip(p.weights, p.components):
            if weight > 0:
                total += weight * expect_fn_on(
                    component, f, lo, hi, nodes=nodes, vectorized=vectorized
                )
        return total

    points, weights = quadrature_rule(p, nodes, lo, hi)
    if points.size == 0:
        return 0.0
    values = _evaluate(f, points, vectorized)
    bad = ~np.isfinite(values) & (weights > 0)
    if bad.any():
        node = float(points[np.argmax(bad)])
        console.verbose(f"non-finite integrand at node {node!r} under {p}")
        raise EvaluationException(NONFINITE_NODE_ERROR % node, node=node)
    return float(np.dot(weights, np.where(weights > 0, values, 0.0)))


def expect_fn(
    p: FirstOrderDist,
    f: Callable,
    nodes: Optional[int] = None,
    vectorized: bool = False,
) -> float:
    """
    Expectation ``E_{Y~p}[f(Y)]``.

    Exact summation for categoricals, Gauss-Hermite quadrature for Gaussians,
    transformed Gauss-Legendre quadrature for truncated Gaussians and Student-t,
    weight-combined for mixtures.

    Args:
        p (FirstOrderDist): The distribution of ``Y``.
        f (Callable): The integrand.
        nodes (Optional[int]): Quadrature node count, at least 8.
        vectorized (bool): Whether ``f`` accepts numpy arrays.

    Returns:
        float: The expectation.

    Raises:
        EvaluationException: If the integrand is not finite at a node.
    """
    return expect_fn_on(p, f, nodes=nodes, vectorized=vectorized)


def s1(
    loss: Union[str, FirstOrderLoss],
    p_hat: FirstOrderDist,
    p: FirstOrderDist,
    nodes: Optional[int] = None,
) -> ScoreValue:
    """
    Expected first-order score ``S1(p_hat, p) = E_{Y~p}[L1(p_hat, Y)]``.

    Args:
        loss (Union[str, FirstOrderLoss]): A registered loss name or a
            callable ``(p_hat, y) -> float``.
        p_hat (FirstOrderDist): The prediction.
        p (FirstOrderDist): The target distribution.
        nodes (Optional[int]): Quadrature node count for continuous targets.

    Returns:
        ScoreValue: The score, tagged ``exact`` or ``quadrature(n)``.
    """
    loss_fn = get_first_order_loss(loss) if isinstance(loss, str) else loss
    target = collapse(p)
    value = expect_fn(target, lambda y: loss_fn(p_hat, y), nodes=nodes)
    if isinstance(target, Categorical):
        return ScoreValue(value, 0.0, METHOD_EXACT)
    return ScoreValue(value, 0.0, quadrature_tag(nodes or default_nodes(target)))


def sample(p: FirstOrderDist, size: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw outcomes from a first-order distribution.

    Args:
        p (FirstOrderDist): The distribution.
        size (int): Number of outcomes.
        rng (np.random.Generator): Source of randomness.

    Returns:
        np.ndarray: Class indices (classification) or reals (regression).
    """
    if isinstance(p, Categorical):
        return rng.choice(p.k, size=size, p=p.as_array())
    if isinstance(p, GaussianDist):
        return rng.normal(p.mu, p.sigma, size=size)
    if isinstance(p, StudentTDist):
        return p.loc + p.scale * rng.standard_t(p.dof, size=size)
    if isinstance(p, TruncatedGaussian):
        return p.frozen().rvs(size=size, random_state=rng)

    counts = rng.multinomial(size, np.asarray(p.weights))
    parts = [
        sample(component, int(count), rng)
        for count, component in zip(counts, p.components)
        if count > 0
    ]
    return rng.permutation(np.concatenate(parts))
