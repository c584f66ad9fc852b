"""
Second-order distributions: distributions over first-order distributions.

Supported families are the Dirichlet family (classification), the
normal-inverse-gamma family (regression), finite mixtures of Dirac measures
and symbolic convex mixtures ``(1 - lam) * Q_a + lam * Q_b``.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy import special

from . import first_order
from .constants import MAX_CONVEX_DEPTH, TASK_CLASSIFICATION, TASK_REGRESSION
from .exceptions import InvalidArgumentException
from .first_order import (
    Categorical,
    FiniteMixture,
    FirstOrderDist,
    StudentTDist,
    check_probability_vector,
)
from .messages import (
    CATEGORICAL_SIZE_ERROR,
    CLASSIFICATION_ONLY_ERROR,
    DIRICHLET_DIMENSION_ERROR,
    LAMBDA_RANGE_ERROR,
    MIXED_TASK_ERROR,
    MIXTURE_EMPTY_ERROR,
    MIXTURE_SIZE_ERROR,
    NESTING_DEPTH_ERROR,
    NIG_PARAMETER_ERROR,
    POSITIVE_PARAMETER_ERROR,
    REGRESSION_ONLY_ERROR,
)


def _check_alpha(alpha) -> Tuple[float, ...]:  # type: ignore[no-untyped-def]
    values = tuple(float(a) for a in alpha)
    if len(values) < 2:
        raise InvalidArgumentException(CATEGORICAL_SIZE_ERROR % len(values))
    for a in values:
        if not (math.isfinite(a) and a > 0):
            raise InvalidArgumentException(POSITIVE_PARAMETER_ERROR % ("alpha", a))
    return values


@dataclass(frozen=True)
class Dirichlet:
    """Dirichlet distribution over the probability simplex."""

    alpha: Tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))

    @property
    def k(self) -> int:
        """Number of classes."""
        return len(self.alpha)

    @property
    def alpha0(self) -> float:
        """Concentration ``sum(alpha)``."""
        return math.fsum(self.alpha)

    def as_array(self) -> np.ndarray:
        """Return the parameters as a numpy array."""
        return np.asarray(self.alpha, dtype=float)


@dataclass(frozen=True)
class NIG:
    """
    Normal-inverse-gamma distribution over Gaussians ``N(mu, sigma^2)``.

    ``sigma^2 ~ InvGamma(m3, m4)`` and ``mu | sigma^2 ~ N(m1, sigma^2 / m2)``.
    The boundary ``m3 = 1`` is accepted so that the reference prediction of
    the evidential-regression construction can be represented.
    """

    m1: float
    m2: float
    m3: float
    m4: float

    def __post_init__(self) -> None:
        params = tuple(float(m) for m in (self.m1, self.m2, self.m3, self.m4))
        m1, m2, m3, m4 = params
        valid = all(math.isfinite(m) for m in params) and m2 > 0 and m3 >= 1 and m4 > 0
        if not valid:
            raise InvalidArgumentException(NIG_PARAMETER_ERROR % (params,))
        for name, value in zip(("m1", "m2", "m3", "m4"), params):
            object.__setattr__(self, name, value)

    @property
    def params(self) -> Tuple[float, float, float, float]:
        """The parameter vector ``(m1, m2, m3, m4)``."""
        return (self.m1, self.m2, self.m3, self.m4)


@dataclass(frozen=True)
class DiracMix:
    """Finite mixture of Dirac measures ``sum_j w_j * delta_{p_j}``."""

    weights: Tuple[float, ...]
    atoms: Tuple[FirstOrderDist, ...]

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        if not atoms:
            raise InvalidArgumentException(MIXTURE_EMPTY_ERROR)
        if len(self.weights) != len(atoms):
            raise InvalidArgumentException(
                MIXTURE_SIZE_ERROR % (len(self.weights), len(atoms))
            )
        object.__setattr__(self, "weights", check_probability_vector(self.weights))
        object.__setattr__(self, "atoms", atoms)
        first = first_order.describe_task(atoms[0])
        for atom in atoms[1:]:
            if first_order.describe_task(atom) != first:
                raise InvalidArgumentException(
                    MIXED_TASK_ERROR % (first, first_order.describe_task(atom))
                )

    @classmethod
    def point(cls, p: FirstOrderDist) -> "DiracMix":
        """The Dirac measure ``delta_p``."""
        return cls((1.0,), (p,))


@dataclass(frozen=True)
class ConvexMix:
    """Symbolic convex mixture ``(1 - lam) * q_a + lam * q_b``."""

    lam: float
    q_a: "SecondOrderDist"
    q_b: "SecondOrderDist"

    def __post_init__(self) -> None:
        lam = float(self.lam)
        if not 0.0 <= lam <= 1.0:
            raise InvalidArgumentException(LAMBDA_RANGE_ERROR % lam)
        object.__setattr__(self, "lam", lam)
        if describe_task(self.q_a) != describe_task(self.q_b):
            raise InvalidArgumentException(
                MIXED_TASK_ERROR % (describe_task(self.q_a), describe_task(self.q_b))
            )
        if depth(self) > MAX_CONVEX_DEPTH:
            raise InvalidArgumentException(
                NESTING_DEPTH_ERROR % (depth(self), MAX_CONVEX_DEPTH)
            )


SecondOrderDist = Union[Dirichlet, NIG, DiracMix, ConvexMix]


def depth(q: SecondOrderDist) -> int:
    """Nesting depth of convex mixtures (0 for the base families)."""
    if isinstance(q, ConvexMix):
        return 1 + max(depth(q.q_a), depth(q.q_b))
    return 0


def num_classes(q: SecondOrderDist) -> Optional[int]:
    """Number of classes of a classification-typed distribution, else None."""
    if isinstance(q, Dirichlet):
        return q.k
    if isinstance(q, NIG):
        return None
    if isinstance(q, DiracMix):
        return first_order.num_classes(q.atoms[0])
    return num_classes(q.q_a)


def task_of(q: SecondOrderDist) -> str:
    """Task type of ``q``: ``classification`` or ``regression``."""
    return TASK_REGRESSION if num_classes(q) is None else TASK_CLASSIFICATION


def describe_task(q: SecondOrderDist) -> str:
    """Task type including the class count, e.g. ``classification(K=2)``."""
    k = num_classes(q)
    return TASK_REGRESSION if k is None else f"{TASK_CLASSIFICATION}(K={k})"


def _combine(
    weights: List[float], components: List[FirstOrderDist]
) -> FirstOrderDist:
    """Weighted mixture of first-order distributions, flattened and merged."""
    merged: Dict[FirstOrderDist, float] = {}
    for weight, component in zip(weights, components):
        if weight <= 0:
            continue
        if isinstance(component, FiniteMixture):
            for inner_weight, inner in zip(component.weights, component.components):
                if inner_weight > 0:
                    merged[inner] = merged.get(inner, 0.0) + weight * inner_weight
        else:
            merged[component] = merged.get(component, 0.0) + weight

    if len(merged) == 1:
        return next(iter(merged))

    total = math.fsum(merged.values())
    mixture = FiniteMixture(
        tuple(w / total for w in merged.values()), tuple(merged)
    )
    return first_order.collapse(mixture)


@lru_cache(maxsize=4096)
def marginal(q: SecondOrderDist) -> FirstOrderDist:
    """
    Mean measure ``p_bar(A) = E_{p~Q}[p(A)]`` of a second-order distribution.

    Dirichlet parameters map to ``Categorical(alpha / alpha0)`` and NIG
    parameters to the Student-t posterior predictive with ``dof = 2 * m3`` and
    ``scale = sqrt(m4 * (1 + m2) / (m2 * m3))``. Dirac and convex mixtures give
    the weighted mixture of their components' marginals; classification
    mixtures collapse into a single categorical.

    Args:
        q (SecondOrderDist): The second-order distribution.

    Returns:
        FirstOrderDist: Its marginal.
    """
    if isinstance(q, Dirichlet):
        alpha0 = q.alpha0
        return Categorical(tuple(a / alpha0 for a in q.alpha))
    if isinstance(q, NIG):
        scale = math.sqrt(q.m4 * (1.0 + q.m2) / (q.m2 * q.m3))
        return StudentTDist(loc=q.m1, scale=scale, dof=2.0 * q.m3)
    if isinstance(q, DiracMix):
        return _combine(list(q.weights), list(q.atoms))
    return _combine(
        [1.0 - q.lam, q.lam], [marginal(q.q_a), marginal(q.q_b)]
    )


def mean_prob(q: SecondOrderDist, y: int) -> float:
    """
    Expected probability ``E_{p~Q}[p(y)]`` of class ``y``.

    Args:
        q (SecondOrderDist): A classification-typed distribution.
        y (int): The class index.

    Returns:
        float: The expected class probability.

    Raises:
        InvalidArgumentException: If ``q`` is regression-typed or ``y`` is out
            of range.
    """
    if task_of(q) != TASK_CLASSIFICATION:
        raise InvalidArgumentException(
            CLASSIFICATION_ONLY_ERROR % describe_task(q)
        )
    return first_order.mean_prob(marginal(q), y)


def _draw(q: SecondOrderDist, rng: np.random.Generator) -> FirstOrderDist:
    if isinstance(q, Dirichlet):
        return Categorical(tuple(rng.dirichlet(q.as_array())))
    if isinstance(q, NIG):
        variance = q.m4 / rng.gamma(q.m3)
        mu = rng.normal(q.m1, math.sqrt(variance / q.m2))
        return first_order.GaussianDist(mu, math.sqrt(variance))
    if isinstance(q, DiracMix):
        index = rng.choice(len(q.atoms), p=np.asarray(q.weights))
        return q.atoms[int(index)]
    return _draw(q.q_b if rng.random() < q.lam else q.q_a, rng)


def sample_first_order(q: SecondOrderDist, seed: int) -> FirstOrderDist:
    """
    Draw one first-order distribution ``p ~ Q``.

    Dirichlet draws use gamma normalisation, NIG draws an inverse-gamma
    variance then a normal mean, mixtures select a component then recurse.

    Args:
        q (SecondOrderDist): The second-order distribution.
        seed (int): Seed of the ``numpy.random.Generator``.

    Returns:
        FirstOrderDist: The draw; deterministic given the seed.
    """
    return _draw(q, np.random.default_rng(seed))


def _categorical_outcomes(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    cumulative = np.cumsum(probs, axis=1)
    u = rng.random(probs.shape[0])[:, None]
    return np.minimum((u >= cumulative).sum(axis=1), probs.shape[1] - 1)


def sample_outcomes(
    q: SecondOrderDist, n: int, rng: np.random.Generator
) -> np.ndarray:
    """
    Draw ``n`` outcomes from the two-stage process ``p ~ Q``, ``Y ~ p``.

    Args:
        q (SecondOrderDist): The second-order distribution.
        n (int): Number of outcomes.
        rng (np.random.Generator): Source of randomness.

    Returns:
        np.ndarray: Class indices (classification) or reals (regression).
    """
    if n == 0:
        return np.zeros(0)
    if isinstance(q, Dirichlet):
        return _categorical_outcomes(rng.dirichlet(q.as_array(), size=n), rng)
    if isinstance(q, NIG):
        variance = q.m4 / rng.gamma(q.m3, size=n)
        mu = rng.normal(q.m1, np.sqrt(variance / q.m2))
        return rng.normal(mu, np.sqrt(variance))

    if isinstance(q, DiracMix):
        counts = rng.multinomial(n, np.asarray(q.weights))
        parts = [
            first_order.sample(atom, int(count), rng)
            for count, atom in zip(counts, q.atoms)
            if count > 0
        ]
    else:
        n_b = int(rng.binomial(n, q.lam))
        parts = [sample_outcomes(q.q_a, n - n_b, rng), sample_outcomes(q.q_b, n_b, rng)]
    return rng.permutation(np.concatenate(parts))


def mix(q_prime: SecondOrderDist, q: SecondOrderDist, lam: float) -> ConvexMix:
    """
    Convex combination ``(1 - lam) * q_prime + lam * q``.

    Args:
        q_prime (SecondOrderDist): The distribution weighted by ``1 - lam``.
        q (SecondOrderDist): The distribution weighted by ``lam``.
        lam (float): Mixing weight in ``[0, 1]``.

    Returns:
        ConvexMix: The symbolic mixture.

    Raises:
        InvalidArgumentException: If ``lam`` is outside ``[0, 1]`` or the task
            types differ.
    """
    return ConvexMix(lam, q_prime, q)


def kl_dirichlet(alpha, beta) -> float:  # type: ignore[no-untyped-def]
    """
    Closed-form ``KL(Dir(alpha) || Dir(beta))``.

    Args:
        alpha: Parameters of the first Dirichlet.
        beta: Parameters of the second Dirichlet.

    Returns:
        float: The divergence, ``>= 0`` and ``0`` for equal parameters.

    Raises:
        InvalidArgumentException: On dimension mismatch or invalid parameters.
    """
    a = _check_alpha(alpha.alpha if isinstance(alpha, Dirichlet) else alpha)
    b = _check_alpha(beta.alpha if isinstance(beta, Dirichlet) else beta)
    if len(a) != len(b):
        raise InvalidArgumentException(DIRICHLET_DIMENSION_ERROR % (len(a), len(b)))
    if a == b:
        return 0.0

    a_arr, b_arr = np.asarray(a), np.asarray(b)
    a0, b0 = a_arr.sum(), b_arr.sum()
    value = (
        special.gammaln(a0)
        - special.gammaln(a_arr).sum()
        - special.gammaln(b0)
        + special.gammaln(b_arr).sum()
        + np.dot(a_arr - b_arr, special.digamma(a_arr) - special.digamma(a0))
    )
    return max(float(value), 0.0)


def require_regression(q: SecondOrderDist) -> None:
    """Raise an argument error unless ``q`` is regression-typed."""
    if task_of(q) != TASK_REGRESSION:
        raise InvalidArgumentException(REGRESSION_ONLY_ERROR % describe_task(q))
