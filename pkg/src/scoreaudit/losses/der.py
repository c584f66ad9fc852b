"""
Deep-evidential-regression loss on normal-inverse-gamma predictions.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy import special

from ..constants import TASK_REGRESSION
from ..exceptions import InvalidArgumentException
from ..messages import REGULARISATION_ERROR
from ..second_order import NIG, SecondOrderDist
from .base import SecondOrderLoss

ArrayLike = Union[float, np.ndarray]


def student_t_nll(m: Sequence[float], y: ArrayLike) -> ArrayLike:
    """
    Student-t negative log-likelihood term of the DER loss.

    With ``m24 = 2 * m4 * (1 + m2)``::

        0.5 * log(pi / m2) - m3 * log(m24)
            + (m3 + 0.5) * log((y - m1)^2 * m2 + m24)
            + log(Gamma(m3) / Gamma(m3 + 0.5))

    Args:
        m (Sequence[float]): NIG parameters ``(m1, m2, m3, m4)``.
        y (ArrayLike): Outcome(s).

    Returns:
        ArrayLike: The term, with the shape of ``y``.
    """
    m1, m2, m3, m4 = m
    m24 = 2.0 * m4 * (1.0 + m2)
    return (
        0.5 * math.log(math.pi / m2)
        - m3 * math.log(m24)
        + (m3 + 0.5) * np.log((y - m1) ** 2 * m2 + m24)
        + (special.gammaln(m3) - special.gammaln(m3 + 0.5))
    )


def der_penalty(m: Sequence[float], y: ArrayLike) -> ArrayLike:
    """Evidence penalty ``|m1 - y| * (m3 + 2 * m2)``."""
    m1, m2, m3, _ = m
    return np.abs(m1 - y) * (m3 + 2.0 * m2)


def der_loss(m: Sequence[float], y: ArrayLike, lam: float = 1.0) -> ArrayLike:
    """
    DER loss ``L^t(m, y) + lam * |m1 - y| * (m3 + 2 * m2)``.

    Args:
        m (Sequence[float]): NIG parameters ``(m1, m2, m3, m4)``.
        y (ArrayLike): Outcome(s); numpy arrays are evaluated element-wise.
        lam (float): Penalty weight, ``>= 0``.

    Returns:
        ArrayLike: The loss value(s).
    """
    value = student_t_nll(m, y)
    if lam != 0:
        value = value + lam * der_penalty(m, y)
    if np.ndim(value) == 0:
        return float(value)
    return value


@dataclass(frozen=True)
class DERLoss(SecondOrderLoss):
    """DER loss with penalty weight ``lam``; defined on NIG predictions."""

    lam: float = 1.0

    task = TASK_REGRESSION

    def __post_init__(self) -> None:
        lam = float(self.lam)
        if not (math.isfinite(lam) and lam >= 0):
            raise InvalidArgumentException(REGULARISATION_ERROR % lam)
        object.__setattr__(self, "lam", lam)

    @property
    def name(self) -> str:
        return "der"

    def supports(self, q: SecondOrderDist) -> bool:
        return isinstance(q, NIG)

    def _evaluate(self, q: SecondOrderDist, y: float) -> float:
        return float(der_loss(q.params, y, self.lam))  # type: ignore[union-attr]

    def evaluate_many(self, q: SecondOrderDist, ys: np.ndarray) -> np.ndarray:
        self.check_supported(q)
        return np.asarray(der_loss(q.params, np.asarray(ys, dtype=float), self.lam))  # type: ignore[union-attr]


__all__ = [
    "DERLoss",
    "der_loss",
    "der_penalty",
    "student_t_nll",
]
