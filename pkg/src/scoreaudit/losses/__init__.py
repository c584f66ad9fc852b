"""Second-order loss zoo."""

from typing import Optional

from ..exceptions import UnknownNameException
from .affine import AffineWrappedLoss, affine_wrap
from .base import SecondOrderLoss
from .bayes import BayesLoss, bayes_loss
from .der import DERLoss, der_loss
from .mean_composed import MeanComposedLoss, mean_composed_loss

LOSS_NAMES = (
    "bayes-brier",
    "bayes-ce",
    "der",
    "mean-brier",
    "mean-ce",
    "mean-linear",
    "mean-squared",
)


def get_loss(name: str, lam: Optional[float] = None) -> SecondOrderLoss:
    """
    Build a loss from its registry name.

    Args:
        name (str): One of ``LOSS_NAMES``.
        lam (Optional[float]): Regularisation weight for the Bayesian losses
            (default 0) and the DER loss (default 1); ignored otherwise.

    Returns:
        SecondOrderLoss: The loss descriptor.

    Raises:
        UnknownNameException: If the name is not registered.
    """
    if name == "bayes-ce":
        return BayesLoss(0.0 if lam is None else lam, "ce")
    if name == "bayes-brier":
        return BayesLoss(0.0 if lam is None else lam, "brier")
    if name == "der":
        return DERLoss(1.0 if lam is None else lam)
    if name in LOSS_NAMES:
        return MeanComposedLoss(name.split("-", 1)[1])
    raise UnknownNameException("loss", name, LOSS_NAMES + ("affine",))


__all__ = [
    "AffineWrappedLoss",
    "BayesLoss",
    "DERLoss",
    "LOSS_NAMES",
    "MeanComposedLoss",
    "SecondOrderLoss",
    "affine_wrap",
    "bayes_loss",
    "der_loss",
    "get_loss",
    "mean_composed_loss",
]
