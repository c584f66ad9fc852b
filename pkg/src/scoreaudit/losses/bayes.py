"""
Bayesian second-order losses: the expected first-order loss under a Dirichlet
prediction plus a KL regulariser towards the uniform Dirichlet.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .. import first_order
from ..constants import TASK_CLASSIFICATION
from ..exceptions import InvalidArgumentException
from ..messages import BAYES_KIND_ERROR, REGULARISATION_ERROR, UNSUPPORTED_ARGUMENT_ERROR
from ..second_order import (
    ConvexMix,
    DiracMix,
    Dirichlet,
    SecondOrderDist,
    kl_dirichlet,
    task_of,
)
from .base import SecondOrderLoss

KIND_CE = "ce"
KIND_BRIER = "brier"


def _expected_ce(alpha: np.ndarray, y: int) -> float:
    return float(special.digamma(alpha.sum()) - special.digamma(alpha[y]))


def _expected_brier(alpha: np.ndarray, y: int) -> float:
    alpha0 = alpha.sum()
    expected = alpha / alpha0
    variance = alpha * (alpha0 - alpha) / (alpha0**2 * (alpha0 + 1.0))
    target = np.zeros_like(alpha)
    target[y] = 1.0
    return float(np.sum(variance + (expected - target) ** 2))


def bayes_loss(q: Dirichlet, y: int, lam: float, kind: str = KIND_CE) -> float:
    """
    Bayesian loss ``E_{p~Dir(alpha)}[L1(p, y)] + lam * KL(Dir(alpha) || Dir(1))``.

    The cross-entropy expectation is ``psi(alpha0) - psi(alpha_y)``; the Brier
    expectation is ``sum_k Var(p_k) + (E p_k - 1{k=y})^2`` from the Dirichlet
    moments.

    Args:
        q (Dirichlet): The prediction.
        y (int): The observed class.
        lam (float): Regularisation weight, ``>= 0``.
        kind (str): ``ce`` or ``brier``.

    Returns:
        float: The loss value.

    Raises:
        InvalidArgumentException: If ``q`` is not a Dirichlet or ``y`` is not a
            class index.
    """
    if not isinstance(q, Dirichlet):
        raise InvalidArgumentException(
            UNSUPPORTED_ARGUMENT_ERROR % (f"bayes-{kind}", type(q).__name__)
        )
    if kind not in (KIND_CE, KIND_BRIER):
        raise InvalidArgumentException(BAYES_KIND_ERROR % kind)

    alpha = q.as_array()
    index = first_order.check_class_index(y, q.k)
    expected = _expected_ce(alpha, index) if kind == KIND_CE else _expected_brier(alpha, index)
    if lam == 0:
        return expected
    return expected + lam * kl_dirichlet(q.alpha, (1.0,) * q.k)


@dataclass(frozen=True)
class BayesLoss(SecondOrderLoss):
    """
    Bayesian cross-entropy or Brier loss with regularisation weight ``lam``.

    Defined on Dirichlet predictions. With ``lam == 0`` the loss is the plain
    expected first-order loss, which extends linearly to Dirac and convex
    mixtures.
    """

    lam: float = 0.0
    kind: str = KIND_CE

    task = TASK_CLASSIFICATION

    def __post_init__(self) -> None:
        lam = float(self.lam)
        if not (math.isfinite(lam) and lam >= 0):
            raise InvalidArgumentException(REGULARISATION_ERROR % lam)
        if self.kind not in (KIND_CE, KIND_BRIER):
            raise InvalidArgumentException(BAYES_KIND_ERROR % self.kind)
        object.__setattr__(self, "lam", lam)

    @property
    def name(self) -> str:
        return f"bayes-{self.kind}"

    def supports(self, q: SecondOrderDist) -> bool:
        if isinstance(q, Dirichlet):
            return True
        if self.lam != 0 or task_of(q) != TASK_CLASSIFICATION:
            return False
        if isinstance(q, ConvexMix):
            return self.supports(q.q_a) and self.supports(q.q_b)
        return isinstance(q, DiracMix)

    def _evaluate(self, q: SecondOrderDist, y: float) -> float:
        if isinstance(q, Dirichlet):
            return bayes_loss(q, y, self.lam, self.kind)

        inner = first_order.ce_loss if self.kind == KIND_CE else first_order.brier_loss
        if isinstance(q, DiracMix):
            return sum(
                weight * inner(atom, y)
                for weight, atom in zip(q.weights, q.atoms)
                if weight > 0
            )

        total = 0.0
        if q.lam < 1:
            total += (1.0 - q.lam) * self._evaluate(q.q_a, y)
        if q.lam > 0:
            total += q.lam * self._evaluate(q.q_b, y)
        return total


__all__ = [
    "BayesLoss",
    "bayes_loss",
]
