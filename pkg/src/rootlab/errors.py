"""Exception hierarchy shared by the numeric, symbolic and CLI layers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class RootlabError(Exception):
    """Base class for every error raised by rootlab."""


@dataclass
class DomainError(RootlabError):
    """Non-finite or undefined real arithmetic (ln of x <= 0, division by zero)."""

    message: str

    def __str__(self) -> str:
        return self.message


@dataclass
class FunctionDomainError(DomainError):
    """The test function itself could not be evaluated at a point."""

    point: str = ""

    def __str__(self) -> str:
        if self.point:
            return f"{self.message} (at x = {self.point})"
        return self.message


@dataclass
class ParseError(RootlabError):
    message: str

    def __str__(self) -> str:
        return self.message


@dataclass
class ExpressionSyntaxError(ParseError):
    """Malformed expression; ``offset`` is the byte offset of the problem."""

    offset: int = 0

    def __str__(self) -> str:
        return f"{self.message} at offset {self.offset}"


@dataclass
class UnknownIdentifier(ParseError):
    name: str = ""
    offset: int = 0

    def __str__(self) -> str:
        return f"unknown identifier {self.name!r} at offset {self.offset}"


class NoConvergence(RootlabError):
    """Root refinement failed to contract the residual."""


class MultipleRootSuspected(RootlabError):
    """The derivative at the refined root is too small for a simple root."""


@dataclass
class DegenerateNodes(RootlabError):
    """A divided difference was requested on (numerically) coincident nodes."""

    a: Any
    b: Any

    def __str__(self) -> str:
        return f"degenerate divided difference nodes {self.a} and {self.b}"


class SingularStep(RootlabError):
    """A step denominator vanished or collapsed."""


@dataclass
class UnknownMethod(RootlabError):
    name: str

    def __str__(self) -> str:
        return f"unknown method {self.name!r}"


@dataclass
class UndefinedCOC(RootlabError):
    reason: str

    def __str__(self) -> str:
        return f"COC undefined: {self.reason}"


class NonInvertibleLeadingCoefficient(RootlabError):
    """Series division whose leading coefficient is not a unit monomial."""


class ValuationError(RootlabError):
    """A series argument or quotient has the wrong valuation."""


@dataclass
class TruncationTooLow(RootlabError):
    """The computed series is not precise enough to decide the order."""

    known_through: int
    truncation: int

    def __str__(self) -> str:
        return (
            f"error series is only known through e^{self.known_through} "
            f"at truncation {self.truncation}; raise the truncation order"
        )


@dataclass
class ConfigError(RootlabError):
    key: str
    message: str

    def __str__(self) -> str:
        return f"config {self.key}: {self.message}"


@dataclass
class WeightConditionViolated(RootlabError):
    """A weight function does not meet one of its declared conditions."""

    weight: str
    index: tuple[int, ...]
    expected: Any
    measured: str

    def __str__(self) -> str:
        return (
            f"weight {self.weight}: derivative {self.index} should be {self.expected}, "
            f"finite differences give {self.measured}"
        )


@dataclass
class UnknownParameter(RootlabError):
    method: str
    name: str

    def __str__(self) -> str:
        return f"method {self.method} has no parameter {self.name!r}"
