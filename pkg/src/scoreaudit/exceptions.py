"""Custom exceptions module for scoreaudit."""

from typing import Iterable, Optional


class ScoreauditException(Exception):
    """Base exception for scoreaudit."""


class InvalidArgumentException(ScoreauditException, ValueError):
    """Exception raised when an operation receives an invalid argument."""


class EvaluationException(ScoreauditException):
    """Exception raised when a score or expectation cannot be evaluated.

    Attributes:
        node (Optional[float]): The quadrature node or sample at which the
            evaluation failed, if known.
    """

    def __init__(self, message: str, node: Optional[float] = None) -> None:
        super().__init__(message)
        self.node = node


class ConfigurationException(ScoreauditException):
    """Exceptions related to the run configuration."""


class UnknownNameException(ConfigurationException):
    """Exception raised when a loss or family name is not registered."""

    def __init__(self, kind: str, name: str, valid_names: Iterable[str]) -> None:
        self.valid_names = sorted(valid_names)
        super().__init__(
            f"Unknown {kind} '{name}'. Valid names: {', '.join(self.valid_names)}."
        )


class DescriptorParseException(ConfigurationException):
    """Exception raised when a text descriptor could not be parsed."""


class ReportExistsException(ConfigurationException):
    """Exception raised when a report would overwrite an existing one."""
