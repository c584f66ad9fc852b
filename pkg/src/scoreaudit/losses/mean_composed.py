"""
Mean-composed losses: a first-order loss applied to the marginal of the
second-order prediction.
"""

from dataclasses import dataclass

import numpy as np

from .. import first_order
from ..constants import TASK_CLASSIFICATION, TASK_REGRESSION
from ..second_order import SecondOrderDist, marginal, task_of
from .base import SecondOrderLoss

REGRESSION_KINDS = ("squared",)


def mean_composed_loss(kind: str, q: SecondOrderDist, y: float) -> float:
    """
    Evaluate ``L1(marginal(q), y)``.

    Args:
        kind (str): A registered first-order loss name.
        q (SecondOrderDist): The second-order prediction.
        y (float): The outcome.

    Returns:
        float: The loss; ``+inf`` for cross-entropy at an impossible class.
    """
    return MeanComposedLoss(kind).evaluate(q, y)


@dataclass(frozen=True)
class MeanComposedLoss(SecondOrderLoss):
    """
    First-order loss of the marginal: ``L2(Q, y) = L1(marginal(Q), y)``.

    Depends on ``Q`` only through its marginal, so it is proper whenever
    ``L1`` is, but never strictly proper.
    """

    kind: str = "brier"

    def __post_init__(self) -> None:
        first_order.get_first_order_loss(self.kind)

    @property
    def name(self) -> str:
        return f"mean-{self.kind}"

    @property
    def task(self) -> str:  # type: ignore[override]
        return TASK_REGRESSION if self.kind in REGRESSION_KINDS else TASK_CLASSIFICATION

    def supports(self, q: SecondOrderDist) -> bool:
        return task_of(q) == self.task

    def _evaluate(self, q: SecondOrderDist, y: float) -> float:
        return float(first_order.get_first_order_loss(self.kind)(marginal(q), y))

    def evaluate_many(self, q: SecondOrderDist, ys: np.ndarray) -> np.ndarray:
        if self.kind in REGRESSION_KINDS:
            self.check_supported(q)
            return np.asarray(
                first_order.squared_loss(marginal(q), np.asarray(ys, dtype=float))
            )
        return super().evaluate_many(q, ys)


__all__ = [
    "MeanComposedLoss",
    "mean_composed_loss",
]
