"""
Affine wrapping ``c * L2(Q, y) + g(y)`` of a second-order loss.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..constants import MAX_AFFINE_DEPTH
from ..exceptions import InvalidArgumentException
from ..messages import (
    AFFINE_COEFFICIENTS_ERROR,
    AFFINE_SCALE_ERROR,
    NESTING_DEPTH_ERROR,
    POLYNOMIAL_DEGREE_ERROR,
)
from ..second_order import SecondOrderDist
from .base import SecondOrderLoss

MAX_DEGREE = 2


@dataclass(frozen=True)
class AffineWrappedLoss(SecondOrderLoss):
    """
    Loss ``c * inner(Q, y) + g(y)`` with ``c > 0`` and ``g`` a polynomial of
    degree at most 2, stored as coefficients ``(g0, g1, g2)``.
    """

    c: float
    g: Tuple[float, ...]
    inner: SecondOrderLoss

    def __post_init__(self) -> None:
        c = float(self.c)
        if not (math.isfinite(c) and c > 0):
            raise InvalidArgumentException(AFFINE_SCALE_ERROR % c)
        coefficients = tuple(float(v) for v in self.g) or (0.0,)
        if len(coefficients) > MAX_DEGREE + 1:
            raise InvalidArgumentException(
                POLYNOMIAL_DEGREE_ERROR % (len(coefficients) - 1)
            )
        if not all(math.isfinite(v) for v in coefficients):
            raise InvalidArgumentException(AFFINE_COEFFICIENTS_ERROR % (coefficients,))
        if self.depth > MAX_AFFINE_DEPTH:
            raise InvalidArgumentException(
                NESTING_DEPTH_ERROR % (self.depth, MAX_AFFINE_DEPTH)
            )
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "g", coefficients)

    @property
    def name(self) -> str:
        return "affine"

    @property
    def task(self) -> Optional[str]:  # type: ignore[override]
        return self.inner.task

    @property
    def depth(self) -> int:
        """Number of nested affine wraps, this one included."""
        if isinstance(self.inner, AffineWrappedLoss):
            return 1 + self.inner.depth
        return 1

    def shift(self, y):  # type: ignore[no-untyped-def]
        """Evaluate the outcome shift ``g(y)``; accepts arrays."""
        return np.polynomial.polynomial.polyval(y, self.g)

    def supports(self, q: SecondOrderDist) -> bool:
        return self.inner.supports(q)

    def _evaluate(self, q: SecondOrderDist, y: float) -> float:
        return self.c * self.inner.evaluate(q, y) + float(self.shift(y))

    def evaluate_many(self, q: SecondOrderDist, ys: np.ndarray) -> np.ndarray:
        ys = np.asarray(ys)
        return self.c * self.inner.evaluate_many(q, ys) + self.shift(ys.astype(float))


def affine_wrap(
    inner: SecondOrderLoss, c: float, g: Tuple[float, ...] = (0.0,)
) -> AffineWrappedLoss:
    """
    Wrap a loss as ``c * inner(Q, y) + g(y)``.

    Args:
        inner (SecondOrderLoss): The wrapped loss.
        c (float): Positive scale.
        g (Tuple[float, ...]): Polynomial coefficients ``(g0, g1, g2)``.

    Returns:
        AffineWrappedLoss: The wrapped loss.
    """
    return AffineWrappedLoss(c, tuple(g), inner)


__all__ = [
    "AffineWrappedLoss",
    "affine_wrap",
]
