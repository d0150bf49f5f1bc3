"""Truncated power series in the error e with polynomial coefficients.

Every series carries the precision to which it is known: coefficients of
e^k for k < ``precision`` are exact, everything from e^precision on is
unknown. Products and quotients propagate precision from the valuations of
their operands, so a result never claims more than its inputs determine.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Sequence

from rootlab.errors import ValuationError
from rootlab.orderlab.poly import ONE, ZERO, Poly, c

DEFAULT_TRUNCATION = 8


class Series:
    __slots__ = ("coefficients", "precision", "truncation")

    def __init__(
        self,
        coefficients: Sequence[Poly | int | Fraction],
        precision: int | None = None,
        truncation: int = DEFAULT_TRUNCATION,
    ):
        limit = truncation + 1 if precision is None else min(precision, truncation + 1)
        coeffs = [Poly.lift(value) for value in list(coefficients)[:limit]]
        if any(value is None for value in coeffs):
            raise TypeError("series coefficients must be polynomials or rationals")
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))
        object.__setattr__(self, "precision", limit)
        object.__setattr__(self, "truncation", truncation)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @classmethod
    def constant(cls, value: Poly | int | Fraction, truncation: int = DEFAULT_TRUNCATION) -> "Series":
        return cls([value], truncation=truncation)

    @classmethod
    def variable(cls, truncation: int = DEFAULT_TRUNCATION) -> "Series":
        """The error e itself."""
        return cls([0, 1], truncation=truncation)

    def _lift(self, other) -> "Series | None":
        if isinstance(other, Series):
            if other.truncation != self.truncation:
                raise ValueError("series with different truncation orders")
            return other
        value = Poly.lift(other)
        return None if value is None else Series.constant(value, self.truncation)

    # -- queries ----------------------------------------------------------------------

    def __getitem__(self, k: int) -> Poly:
        if k >= self.precision:
            raise IndexError(f"coefficient of e^{k} is beyond the known precision {self.precision}")
        return self.coefficients[k] if k < len(self.coefficients) else ZERO

    def valuation(self) -> int:
        """Index of the first nonzero coefficient, or ``precision`` if none is known."""
        for k, value in enumerate(self.coefficients):
            if not value.is_zero():
                return k
        return self.precision

    def is_known_zero(self) -> bool:
        return not self.coefficients

    def leading(self) -> Poly:
        v = self.valuation()
        if v >= self.precision:
            raise ValuationError("series has no known nonzero coefficient")
        return self.coefficients[v]

    def truncated(self, precision: int) -> "Series":
        return Series(self.coefficients, min(precision, self.precision), self.truncation)

    def agrees_with(self, other: "Series") -> bool:
        """Coefficient-wise equality through the precision both series know."""
        known = min(self.precision, other.precision)
        return all(self[k] == other[k] for k in range(known))

    def map(self, fn) -> "Series":
        return Series([fn(value) for value in self.coefficients], self.precision, self.truncation)

    # -- arithmetic -------------------------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        precision = min(self.precision, o.precision)
        size = min(max(len(self.coefficients), len(o.coefficients)), precision)
        return Series([self[k] + o[k] for k in range(size)], precision, self.truncation)

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda value: -value)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        scalar = Poly.lift(other)
        if scalar is not None:
            return self.map(lambda value: value * scalar)
        if not isinstance(other, Series):
            return NotImplemented
        va, vb = self.valuation(), other.valuation()
        precision = min(self.precision + vb, other.precision + va, self.truncation + 1)
        a, b = self.coefficients, other.coefficients
        result = []
        for k in range(min(precision, len(a) + len(b) - 1) if a and b else 0):
            total = ZERO
            for i in range(max(va, k - len(b) + 1), min(k - vb, len(a) - 1) + 1):
                if a[i] and b[k - i]:
                    total = total + a[i] * b[k - i]
            result.append(total)
        return Series(result, precision, self.truncation)

    __rmul__ = __mul__

    def _reciprocal_unit(self) -> "Series":
        """1/self for a series whose constant term is invertible."""
        inverse0 = self[0].inverse()
        coefficients = [inverse0]
        for k in range(1, self.precision):
            total = ZERO
            for j in range(1, k + 1):
                if j < len(self.coefficients) and self.coefficients[j]:
                    total = total + self.coefficients[j] * coefficients[k - j]
            coefficients.append(-(inverse0 * total))
        return Series(coefficients, self.precision, self.truncation)

    def _shifted(self, v: int) -> "Series":
        """self / e^v for v at most the valuation."""
        return Series(self.coefficients[v:], self.precision - v, self.truncation)

    def __truediv__(self, other):
        scalar = Poly.lift(other)
        if scalar is not None:
            inverse = scalar.inverse()
            return self.map(lambda value: value * inverse)
        if not isinstance(other, Series):
            return NotImplemented
        vb = other.valuation()
        if vb >= other.precision:
            raise ValuationError("division by a series with no known nonzero coefficient")
        va = self.valuation()
        if self.is_known_zero():
            return Series([], max(self.precision - vb, 0), self.truncation)
        if va < vb:
            raise ValuationError(f"quotient would have a pole of order {vb - va}")
        return self._shifted(vb) * other._shifted(vb)._reciprocal_unit()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent):
        if isinstance(exponent, Rational) and not isinstance(exponent, bool) and Fraction(exponent).denominator == 1:
            n = int(exponent)
            if n < 0:
                return Series.constant(1, self.truncation) / self ** (-n)
            result, base = Series.constant(1, self.truncation), self
            while n:
                if n & 1:
                    result = result * base
                base = base * base
                n >>= 1
            return result
        power = Poly.lift(exponent)
        if power is None:
            return NotImplemented
        return self._binomial(power)

    def _binomial(self, power: Poly) -> "Series":
        """(1 + u)^power for u of positive valuation."""
        if self[0] != ONE:
            raise ValuationError("non-integer powers need a series with constant term 1")
        u = self - 1
        result = Series.constant(1, self.truncation)
        term = Series.constant(1, self.truncation)
        coefficient = ONE
        for k in range(1, self.truncation + 1):
            coefficient = coefficient * (power - (k - 1)) * Fraction(1, k)
            term = term * u
            if term.is_known_zero() and term.precision > self.truncation:
                break
            result = result + term * coefficient
        return result

    def __repr__(self) -> str:
        return f"Series({format_series(self)})"


def format_series(series: Series) -> str:
    parts = []
    for k, value in enumerate(series.coefficients):
        if value.is_zero():
            continue
        power = "" if k == 0 else ("e" if k == 1 else f"e^{k}")
        parts.append(f"({value}){'*' + power if power else ''}")
    parts.append(f"O(e^{series.precision})")
    return " + ".join(parts)


def compose_f(arg: Series, derivative: bool = False) -> Series:
    """f(alpha + arg), or f'(alpha + arg), from the Taylor expansion of f at its root.

    Raises:
        ValuationError: ``arg`` does not vanish at e = 0.
    """
    if arg.valuation() == 0:
        raise ValuationError("f can only be composed with a root offset of positive valuation")
    T = arg.truncation
    if derivative:
        total = power = Series.constant(1, T)
        for k in range(2, T + 2):
            power = power * arg  # arg^(k-1)
            total = total + power * (k * c(k))
    else:
        total = power = arg
        for k in range(2, T + 1):
            power = power * arg
            total = total + power * c(k)
    return total * c(1)


def homogeneous(a_powers: Sequence[Series], b_powers: Sequence[Series], m: int) -> Series:
    """Complete homogeneous polynomial h_m(a, b) = sum of a^i b^(m-i)."""
    total = a_powers[0] * b_powers[m]
    for i in range(1, m + 1):
        total = total + a_powers[i] * b_powers[m - i]
    return total
