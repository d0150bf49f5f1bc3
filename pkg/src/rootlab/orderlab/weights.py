"""Generic weight functions expanded as truncated multivariate Taylor polynomials."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod
from typing import Any, Iterator, Mapping, Sequence

from rootlab.errors import ValuationError
from rootlab.orderlab.poly import Poly
from rootlab.orderlab.series import Series


def _monomials(valuations: Sequence[int], budget: int) -> Iterator[tuple[int, ...]]:
    """Exponent vectors whose weighted degree sum(k_i * v_i) stays within budget."""
    if not valuations:
        yield ()
        return
    head, rest = valuations[0], valuations[1:]
    for k in range(budget // head + 1):
        for tail in _monomials(rest, budget - k * head):
            yield (k, *tail)


@dataclass(frozen=True)
class GenericWeight:
    """A weight known only through some of its derivatives at the origin.

    Unconstrained Taylor coefficients become symbols, named from ``names``
    when given (``{(2,): "M0"}``) and ``<name>_<index>`` otherwise.

    Args:
        offset: Valuation of the factor the weight multiplies; only terms that
            can reach the truncation order after that factor are expanded.
        extra_terms: Expand this many orders beyond what the truncation needs.
    """

    name: str
    args: tuple[str, ...]
    offset: int
    conditions: Mapping[tuple[int, ...], Any] = field(default_factory=dict)
    names: Mapping[tuple[int, ...], str] = field(default_factory=dict)
    extra_terms: int = 0

    def coefficient(self, index: tuple[int, ...]) -> Poly:
        """Taylor coefficient of t^index: a pinned derivative over index!, or a symbol."""
        if index in self.conditions:
            value = Poly.lift(self.conditions[index])
            return value * Fraction(1, prod(factorial(k) for k in index))
        if index in self.names:
            return Poly.symbol(self.names[index])
        return Poly.symbol(f"{self.name}_{''.join(str(k) for k in index)}")

    def __call__(self, ratios: Mapping[str, Series]) -> Series:
        return expand_weight(self, [ratios[a] for a in self.args])


def expand_weight(weight: GenericWeight, args: Sequence[Series]) -> Series:
    """Expand ``weight`` at series arguments that all vanish at e = 0.

    Raises:
        ValuationError: An argument has a nonzero constant term.
    """
    truncation = args[0].truncation
    valuations = [arg.valuation() for arg in args]
    if any(v == 0 for v in valuations):
        raise ValuationError(f"weight {weight.name}: arguments must vanish at the root")
    budget = max(truncation - weight.offset + weight.extra_terms, 0)

    powers: dict[tuple[int, int], Series] = {}

    def power(i: int, k: int) -> Series:
        if (i, k) not in powers:
            powers[(i, k)] = Series.constant(1, truncation) if k == 0 else power(i, k - 1) * args[i]
        return powers[(i, k)]

    total = Series([], truncation=truncation)
    for index in _monomials(valuations, budget):
        coefficient = weight.coefficient(index)
        if coefficient.is_zero():
            continue
        term = Series.constant(coefficient, truncation)
        for i, k in enumerate(index):
            if k:
                term = term * power(i, k)
        total = total + term
    return total.truncated(budget + 1)
