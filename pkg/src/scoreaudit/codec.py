"""
Text descriptors of distributions and losses.

Every value is written as ``name(arg, ...)``; mixture items are weighted as
``w*descriptor``. Floats use ``repr``, so a dumped descriptor parses back to
an equal value. Examples::

    dirichlet(2.0, 2.0)
    dirac(0.5*categorical(1.0, 0.0), 0.5*categorical(0.0, 1.0))
    convex(0.25, nig(0.0, 1.0, 2.0, 1.0), nig(0.0, 3.0, 2.0, 1.5))
    affine(3.7, poly(0.0, 0.0, 1.0), der(1.0))
"""

import math
import re
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Tuple, Union

from .exceptions import DescriptorParseException, UnknownNameException
from .first_order import (
    Categorical,
    FiniteMixture,
    GaussianDist,
    StudentTDist,
    TruncatedGaussian,
)
from .losses import (
    LOSS_NAMES,
    AffineWrappedLoss,
    BayesLoss,
    DERLoss,
    MeanComposedLoss,
    SecondOrderLoss,
)
from .messages import DESCRIPTOR_SYNTAX_ERROR
from .second_order import NIG, ConvexMix, DiracMix, Dirichlet

_TOKEN = re.compile(
    r"\s*(?:(?P<number>[+-]?(?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|inf))"
    r"|(?P<name>[a-z][a-z0-9-]*)"
    r"|(?P<punct>[(),*]))"
)


@dataclass(frozen=True)
class _Call:
    name: str
    args: Tuple[Any, ...]


@dataclass(frozen=True)
class _Weighted:
    weight: float
    value: _Call


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    position = 0
    stripped = text.rstrip()
    while position < len(stripped):
        match = _TOKEN.match(stripped, position)
        if match is None:
            raise DescriptorParseException(
                DESCRIPTOR_SYNTAX_ERROR % (text, f"unexpected character at {position}")
            )
        kind = match.lastgroup or ""
        tokens.append((kind, match.group(kind)))
        position = match.end()
    return tokens


class _Parser:
    """Recursive-descent parser for the descriptor grammar."""

    def __init__(self, text: str) -> None:
        self._text = text
        self._tokens = _tokenize(text)
        self._position = 0

    def _fail(self, reason: str) -> DescriptorParseException:
        return DescriptorParseException(DESCRIPTOR_SYNTAX_ERROR % (self._text, reason))

    def _peek(self) -> Tuple[str, str]:
        if self._position < len(self._tokens):
            return self._tokens[self._position]
        return ("end", "")

    def _next(self) -> Tuple[str, str]:
        token = self._peek()
        self._position += 1
        return token

    def _expect(self, value: str) -> None:
        kind, token = self._next()
        if token != value:
            raise self._fail(f"expected '{value}', found '{token or kind}'")

    def parse(self) -> _Call:
        call = self._call()
        if self._peek()[0] != "end":
            raise self._fail(f"trailing input '{self._peek()[1]}'")
        return call

    def _call(self) -> _Call:
        kind, name = self._next()
        if kind != "name":
            raise self._fail(f"expected a name, found '{name or kind}'")
        if self._peek()[1] != "(":
            return _Call(name, ())
        self._next()

        args: List[Any] = []
        if self._peek()[1] != ")":
            args.append(self._arg())
            while self._peek()[1] == ",":
                self._next()
                args.append(self._arg())
        self._expect(")")
        return _Call(name, tuple(args))

    def _arg(self) -> Any:
        kind, token = self._peek()
        if kind == "number":
            self._next()
            value = float(token)
            if self._peek()[1] == "*":
                self._next()
                return _Weighted(value, self._call())
            return value
        return self._call()


def _numbers(call: _Call, count: Union[int, None] = None) -> List[float]:
    if not all(isinstance(arg, float) for arg in call.args):
        raise DescriptorParseException(
            DESCRIPTOR_SYNTAX_ERROR % (call.name, "expected numeric arguments")
        )
    if count is not None and len(call.args) != count:
        raise DescriptorParseException(
            DESCRIPTOR_SYNTAX_ERROR
            % (call.name, f"expected {count} arguments, got {len(call.args)}")
        )
    return list(call.args)


def _weighted(call: _Call, build: Callable[[_Call], Any]) -> Tuple[Tuple[float, ...], Tuple[Any, ...]]:
    items = call.args
    if len(items) == 1 and isinstance(items[0], _Call):
        return (1.0,), (build(items[0]),)
    if not items or not all(isinstance(item, _Weighted) for item in items):
        raise DescriptorParseException(
            DESCRIPTOR_SYNTAX_ERROR % (call.name, "expected weighted items 'w*descriptor'")
        )
    return (
        tuple(item.weight for item in items),
        tuple(build(item.value) for item in items),
    )


def _build_first_order(call: _Call) -> Any:
    if call.name == "categorical":
        return Categorical(tuple(_numbers(call)))
    if call.name == "gaussian":
        return GaussianDist(*_numbers(call, 2))
    if call.name == "student-t":
        return StudentTDist(*_numbers(call, 3))
    if call.name == "truncated-gaussian":
        return TruncatedGaussian(*_numbers(call, 4))
    if call.name == "mixture":
        return FiniteMixture(*_weighted(call, _build_first_order))
    raise UnknownNameException("first-order distribution", call.name, FIRST_ORDER_NAMES)


def _build_second_order(call: _Call) -> Any:
    if call.name == "dirichlet":
        return Dirichlet(tuple(_numbers(call)))
    if call.name == "nig":
        return NIG(*_numbers(call, 4))
    if call.name == "dirac":
        return DiracMix(*_weighted(call, _build_first_order))
    if call.name == "convex":
        if len(call.args) != 3 or not isinstance(call.args[0], float):
            raise DescriptorParseException(
                DESCRIPTOR_SYNTAX_ERROR % (call.name, "expected (lambda, Q_a, Q_b)")
            )
        return ConvexMix(
            call.args[0], _build_second_order(call.args[1]), _build_second_order(call.args[2])
        )
    raise UnknownNameException("second-order distribution", call.name, SECOND_ORDER_NAMES)


def _build_loss(call: _Call) -> SecondOrderLoss:
    if call.name in ("bayes-ce", "bayes-brier"):
        (lam,) = _numbers(call, 1)
        return BayesLoss(lam, call.name.split("-", 1)[1])
    if call.name == "der":
        (lam,) = _numbers(call, 1)
        return DERLoss(lam)
    if call.name in LOSS_NAMES:
        _numbers(call, 0)
        return MeanComposedLoss(call.name.split("-", 1)[1])
    if call.name == "affine":
        args = call.args
        valid = (
            len(args) == 3
            and isinstance(args[0], float)
            and isinstance(args[1], _Call)
            and args[1].name == "poly"
            and isinstance(args[2], _Call)
        )
        if not valid:
            raise DescriptorParseException(
                DESCRIPTOR_SYNTAX_ERROR % (call.name, "expected (c, poly(g0, g1, g2), inner)")
            )
        return AffineWrappedLoss(args[0], tuple(_numbers(args[1])), _build_loss(args[2]))
    raise UnknownNameException("loss", call.name, LOSS_NAMES + ("affine",))


FIRST_ORDER_NAMES = ("categorical", "gaussian", "mixture", "student-t", "truncated-gaussian")
SECOND_ORDER_NAMES = ("convex", "dirac", "dirichlet", "nig")


def parse_first_order(text: str) -> Any:
    """
    Parse a first-order distribution descriptor.

    Args:
        text (str): e.g. ``gaussian(0.0, 1.0)``.

    Returns:
        FirstOrderDist: The distribution.

    Raises:
        DescriptorParseException: On malformed text.
        UnknownNameException: On an unknown family name.
    """
    return _build_first_order(_Parser(text).parse())


def parse_second_order(text: str) -> Any:
    """
    Parse a second-order distribution descriptor.

    Args:
        text (str): e.g. ``dirichlet(2.0, 2.0)``.

    Returns:
        SecondOrderDist: The distribution.
    """
    return _build_second_order(_Parser(text).parse())


def parse_loss(text: str) -> SecondOrderLoss:
    """
    Parse a loss descriptor.

    Args:
        text (str): e.g. ``bayes-ce(0.0)`` or ``mean-brier``.

    Returns:
        SecondOrderLoss: The loss.
    """
    return _build_loss(_Parser(text).parse())


def _number(value: float) -> str:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return repr(float(value))


def _join(name: str, parts: List[str]) -> str:
    return f"{name}({', '.join(parts)})"


def _items(weights: Tuple[float, ...], values: Tuple[Any, ...]) -> List[str]:
    return [f"{_number(w)}*{dump(v)}" for w, v in zip(weights, values)]


_DUMPERS: Dict[type, Callable[[Any], str]] = {
    Categorical: lambda p: _join("categorical", [_number(v) for v in p.probs]),
    GaussianDist: lambda p: _join("gaussian", [_number(p.mu), _number(p.sigma)]),
    StudentTDist: lambda p: _join(
        "student-t", [_number(p.loc), _number(p.scale), _number(p.dof)]
    ),
    TruncatedGaussian: lambda p: _join(
        "truncated-gaussian", [_number(v) for v in (p.mu, p.sigma, p.lo, p.hi)]
    ),
    FiniteMixture: lambda p: _join("mixture", _items(p.weights, p.components)),
    Dirichlet: lambda q: _join("dirichlet", [_number(v) for v in q.alpha]),
    NIG: lambda q: _join("nig", [_number(v) for v in q.params]),
    DiracMix: lambda q: _join("dirac", _items(q.weights, q.atoms)),
    ConvexMix: lambda q: _join("convex", [_number(q.lam), dump(q.q_a), dump(q.q_b)]),
    BayesLoss: lambda loss: _join(loss.name, [_number(loss.lam)]),
    DERLoss: lambda loss: _join(loss.name, [_number(loss.lam)]),
    MeanComposedLoss: lambda loss: loss.name,
    AffineWrappedLoss: lambda loss: _join(
        "affine",
        [_number(loss.c), _join("poly", [_number(v) for v in loss.g]), dump(loss.inner)],
    ),
}


def dump(value: Any) -> str:
    """
    Write a distribution or loss as its text descriptor.

    Args:
        value (Any): A first-order or second-order distribution, or a loss.

    Returns:
        str: The descriptor.

    Raises:
        TypeError: If the value has no descriptor form.
    """
    try:
        return _DUMPERS[type(value)](value)
    except KeyError:
        raise TypeError(f"No descriptor form for {type(value).__name__}.") from None


__all__ = [
    "dump",
    "parse_first_order",
    "parse_loss",
    "parse_second_order",
]
