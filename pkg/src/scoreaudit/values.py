"""
Score values and score gaps shared by the first- and second-order engines.

Every number produced by an evaluation path carries a method tag:

    exact              closed-form or finite summation
    quadrature(<n>)    deterministic quadrature with n nodes
    mc(<n>,seed=<s>)   Monte-Carlo average of n samples drawn with seed s
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from .exceptions import InvalidArgumentException
from .messages import DETERMINISTIC_STDERR_ERROR, NEGATIVE_STDERR_ERROR

METHOD_EXACT = "exact"
METHOD_QUADRATURE = "quadrature"
METHOD_MC = "mc"

FLAG_INFINITE = "infinite"


def quadrature_tag(nodes: int) -> str:
    """Method tag of a quadrature evaluation with the given node count."""
    return f"{METHOD_QUADRATURE}({nodes})"


def mc_tag(samples: int, seed: int) -> str:
    """Method tag of a Monte-Carlo evaluation."""
    return f"{METHOD_MC}({samples},seed={seed})"


def method_kind(tag: str) -> str:
    """
    Strip the parameters from a method tag.

    Args:
        tag (str): A method tag such as ``quadrature(64)``.

    Returns:
        str: One of ``exact``, ``quadrature`` or ``mc``.
    """
    return tag.split("(", 1)[0]


def format_number(value: float) -> Any:
    """
    Convert a float for a JSON document; non-finite values become strings.

    Args:
        value (float): The number to convert.

    Returns:
        Any: The float itself, or ``"inf"``, ``"-inf"``, ``"nan"``.
    """
    value = float(value)
    if math.isfinite(value):
        return value
    return repr(value)


@dataclass(frozen=True)
class ScoreValue:
    """A numeric score estimate with its standard error and method tag."""

    value: float
    stderr: float = 0.0
    method: str = METHOD_EXACT
    flags: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.stderr >= 0:
            raise InvalidArgumentException(
                NEGATIVE_STDERR_ERROR % self.stderr
            )
        if method_kind(self.method) != METHOD_MC and self.stderr != 0:
            raise InvalidArgumentException(
                DETERMINISTIC_STDERR_ERROR % self.method
            )

    @property
    def is_finite(self) -> bool:
        """Whether the score value is a finite number."""
        return math.isfinite(self.value)

    def to_dict(self, label: Optional[str] = None) -> Dict[str, Any]:
        """Return the score as a JSON-ready dictionary."""
        data: Dict[str, Any] = {
            "value": format_number(self.value),
            "stderr": format_number(self.stderr),
            "method": self.method,
        }
        if self.flags:
            data["flags"] = list(self.flags)
        if label is not None:
            data["label"] = label
        return data


@dataclass(frozen=True)
class ScoreGap:
    """Difference ``lhs - rhs`` of two score values with a combined stderr."""

    gap: float
    stderr: float
    lhs: ScoreValue
    rhs: ScoreValue

    @classmethod
    def between(cls, lhs: ScoreValue, rhs: ScoreValue) -> "ScoreGap":
        """
        Build the gap of two independent estimates.

        Identical value objects give a gap of exactly 0 with stderr 0, also
        for infinite scores.

        Args:
            lhs (ScoreValue): Score of the candidate prediction.
            rhs (ScoreValue): Score of the reference prediction.

        Returns:
            ScoreGap: The gap with stderr combined in quadrature.
        """
        if lhs is rhs:
            return cls(0.0, 0.0, lhs, rhs)

        if math.isinf(lhs.value) and lhs.value == rhs.value:
            gap = math.nan
        else:
            gap = lhs.value - rhs.value
        return cls(gap, math.hypot(lhs.stderr, rhs.stderr), lhs, rhs)

    @property
    def is_finite(self) -> bool:
        """Whether the gap is a finite number."""
        return math.isfinite(self.gap)

    def to_dict(self) -> Dict[str, Any]:
        """Return the gap as a JSON-ready dictionary."""
        return {
            "gap": format_number(self.gap),
            "stderr": format_number(self.stderr),
            "lhs": self.lhs.to_dict(),
            "rhs": self.rhs.to_dict(),
        }
