"""Abstract base for second-order losses."""

from abc import ABC, abstractmethod
from typing import Optional

import numpy as np

from ..exceptions import InvalidArgumentException
from ..messages import UNSUPPORTED_ARGUMENT_ERROR
from ..second_order import SecondOrderDist, describe_task


class SecondOrderLoss(ABC):
    """
    Abstract base for a loss ``L2(Q, y)`` comparing a second-order prediction
    ``Q`` with an observed outcome ``y``.

    Subclasses are immutable dataclasses, so equal descriptors compare and
    hash equal.
    """

    #: Task type the loss applies to; None for losses that follow their inner loss.
    task: Optional[str] = None

    @property
    @abstractmethod
    def name(self) -> str:
        """Registry name of the loss kind, e.g. ``bayes-ce``."""
        raise NotImplementedError  # pragma: no cover

    @abstractmethod
    def supports(self, q: SecondOrderDist) -> bool:
        """Whether the loss can be evaluated at the prediction ``q``."""
        raise NotImplementedError  # pragma: no cover

    @abstractmethod
    def _evaluate(self, q: SecondOrderDist, y: float) -> float:
        raise NotImplementedError  # pragma: no cover

    def check_supported(self, q: SecondOrderDist) -> None:
        """
        Raise an argument error unless ``q`` is supported.

        Args:
            q (SecondOrderDist): The prediction.

        Raises:
            InvalidArgumentException: If the loss cannot be evaluated at ``q``.
        """
        if not self.supports(q):
            raise InvalidArgumentException(
                UNSUPPORTED_ARGUMENT_ERROR % (self.name, f"{type(q).__name__} ({describe_task(q)})")
            )

    def evaluate(self, q: SecondOrderDist, y: float) -> float:
        """
        Evaluate ``L2(q, y)``.

        Args:
            q (SecondOrderDist): The second-order prediction.
            y (float): The outcome (class index or real).

        Returns:
            float: The loss, possibly ``+inf``.

        Raises:
            InvalidArgumentException: If the loss does not support ``q``.
        """
        self.check_supported(q)
        return self._evaluate(q, y)

    def evaluate_many(self, q: SecondOrderDist, ys: np.ndarray) -> np.ndarray:
        """
        Evaluate ``L2(q, y)`` for an array of outcomes.

        Args:
            q (SecondOrderDist): The second-order prediction.
            ys (np.ndarray): Outcomes.

        Returns:
            np.ndarray: Loss values with the shape of ``ys``.
        """
        self.check_supported(q)
        ys = np.asarray(ys)
        values = [self._evaluate(q, y) for y in ys.ravel().tolist()]
        return np.asarray(values, dtype=float).reshape(ys.shape)


__all__ = [
    "SecondOrderLoss",
]
