"""Arbitrary-precision real scalars bound to an explicit precision context."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

import mpmath

from rootlab.errors import DomainError, ParseError

Operand = Union["BigReal", int, Fraction]

_DECIMAL = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")

# exp() of an argument this large has an exponent no table can use
_EXP_LIMIT = 2**30
# sin/cos argument reduction needs about log2|x| extra bits
_TRIG_MAG_LIMIT = 2**20

ELEMENTARY = ("exp", "sin", "cos", "ln")


@lru_cache(maxsize=None)
def _mp_context(bits: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Binary precision shared by every value created under it."""

    bits: int

    def __post_init__(self) -> None:
        if not isinstance(self.bits, int) or self.bits < 64:
            raise ValueError(f"precision must be at least 64 bits, got {self.bits!r}")

    @property
    def decimal_digits(self) -> int:
        return self.bits * 30103 // 100000

    @property
    def roundtrip_digits(self) -> int:
        """Significant digits needed for decimal output to identify a value uniquely."""
        return math.ceil(self.bits * math.log10(2)) + 1

    @property
    def mp(self) -> mpmath.MPContext:
        return _mp_context(self.bits)

    def make(self, value: Operand | str) -> "BigReal":
        """Build a value in this context from an int, Fraction, decimal text or BigReal."""
        if isinstance(value, BigReal):
            return self.convert(value)
        if isinstance(value, str):
            return parse_decimal(value, self)
        if isinstance(value, bool):
            raise TypeError("bool is not a numeric operand")
        if isinstance(value, int):
            return BigReal(self.mp.mpf(value), self)
        if isinstance(value, Rational):
            return BigReal(_rational_to_mpf(self.mp, value), self)
        raise TypeError(f"cannot build BigReal from {type(value).__name__}")

    def convert(self, x: "BigReal") -> "BigReal":
        if x.context == self:
            return x
        return BigReal(self.mp.mpf(x.value), self)

    def zero(self) -> "BigReal":
        return BigReal(self.mp.zero, self)

    def power_of_ten(self, exponent: int) -> "BigReal":
        if exponent >= 0:
            return BigReal(self.mp.mpf(10**exponent), self)
        return BigReal(self.mp.mpf(1) / self.mp.mpf(10 ** (-exponent)), self)

    def ulp_scale(self, magnitude: "BigReal | int" = 1) -> "BigReal":
        """2^(1-bits) times max(1, |magnitude|): the relative rounding unit."""
        scale = abs(self.make(magnitude))
        if scale < 1:
            scale = self.make(1)
        return BigReal(self.mp.ldexp(scale.value, 1 - self.bits), self)


def _rational_to_mpf(mp: mpmath.MPContext, value: Rational):
    numerator, denominator = value.numerator, value.denominator
    if denominator == 1:
        return mp.mpf(numerator)
    return mp.mpf(numerator) / denominator


class BigReal:
    """Immutable arbitrary-precision real number.

    Values only mix with ints, Fractions and BigReals of the same context;
    binary floats never enter the arithmetic.
    """

    __slots__ = ("value", "context")

    def __init__(self, value, context: PrecisionContext):
        if not context.mp.isfinite(value):
            raise DomainError(f"non-finite result {value}")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "context", context)

    def __setattr__(self, name, value):
        raise AttributeError("BigReal is immutable")

    def __reduce__(self):
        # per-context mpf classes do not pickle; ship the raw mantissa/exponent
        return (_rebuild, (self.context.bits, self.value._mpf_))

    # -- coercion -----------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, BigReal):
            if other.context.bits != self.context.bits:
                return self.context.convert(other).value
            return other.value
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int):
            return other
        if isinstance(other, Rational):
            return _rational_to_mpf(self.context.mp, other)
        return NotImplemented

    def _wrap(self, value) -> "BigReal":
        return BigReal(value, self.context)

    # -- arithmetic -----------------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o:
            raise DomainError("division by zero")
        return self._wrap(self.value / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.value:
            raise DomainError("division by zero")
        return self._wrap(self.context.mp.mpf(o) / self.value)

    def __pow__(self, exponent):
        if isinstance(exponent, Rational) and exponent.denominator == 1:
            n = int(exponent)
            if n < 0 and not self.value:
                raise DomainError("zero raised to a negative power")
            return self._wrap(self.value**n)
        o = self._coerce(exponent)
        if o is NotImplemented:
            return o
        if self.value <= 0:
            raise DomainError("non-integer power of a non-positive number")
        return self._wrap(self.context.mp.power(self.value, o))

    def __neg__(self):
        return self._wrap(-self.value)

    def __pos__(self):
        return self

    def __abs__(self):
        return self._wrap(abs(self.value))

    # -- comparison -----------------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.value == o

    def __hash__(self):
        return hash((self.context.bits, self.value._mpf_))

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.value < o

    def __le__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.value <= o

    def __gt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.value > o

    def __ge__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self.value >= o

    def __bool__(self):
        return bool(self.value)

    def __float__(self):
        return float(self.value)

    # -- helpers --------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.value

    def exp(self) -> "BigReal":
        return eval_elementary("exp", self)

    def sin(self) -> "BigReal":
        return eval_elementary("sin", self)

    def cos(self) -> "BigReal":
        return eval_elementary("cos", self)

    def ln(self) -> "BigReal":
        return eval_elementary("ln", self)

    def log10(self) -> "BigReal":
        if self.value <= 0:
            raise DomainError("log10 of a non-positive number")
        return self._wrap(self.context.mp.log10(self.value))

    def floor_log10(self) -> int:
        """Exact floor(log10|x|) for nonzero x."""
        if not self.value:
            raise DomainError("log10 of zero")
        magnitude = abs(_exact_fraction(self.value))
        return _decimal_exponent(magnitude)

    def as_fraction(self) -> Fraction:
        return _exact_fraction(self.value)

    def __repr__(self) -> str:
        return f"BigReal({format_scientific(self, 20)}, bits={self.context.bits})"

    def __str__(self) -> str:
        return format_scientific(self, 20)


def _rebuild(bits: int, raw) -> BigReal:
    ctx = PrecisionContext(bits)
    return BigReal(ctx.mp.make_mpf(raw), ctx)


def eval_elementary(fn_id: str, x: BigReal) -> BigReal:
    """Evaluate exp, sin, cos or ln at the context precision of ``x``.

    Raises:
        DomainError: ln of a non-positive argument, or an argument so large the
            result cannot be used (exp overflow, trig argument reduction).
    """
    mp = x.context.mp
    value = x.value
    if fn_id == "exp":
        if value > _EXP_LIMIT:
            raise DomainError(f"exp overflow at argument {format_scientific(x, 6)}")
        return BigReal(mp.exp(value), x.context)
    if fn_id in ("sin", "cos"):
        if value and mp.mag(value) > _TRIG_MAG_LIMIT:
            raise DomainError(f"{fn_id} argument {format_scientific(x, 6)} too large")
        return BigReal(mp.sin(value) if fn_id == "sin" else mp.cos(value), x.context)
    if fn_id == "ln":
        if value <= 0:
            raise DomainError(f"ln of non-positive argument {format_scientific(x, 6)}")
        return BigReal(mp.ln(value), x.context)
    raise ValueError(f"unknown elementary function {fn_id!r}")


def parse_decimal(text: str, ctx: PrecisionContext) -> BigReal:
    """Parse a decimal literal to the nearest value at ``ctx`` precision."""
    stripped = text.strip()
    if not _DECIMAL.match(stripped):
        raise ParseError(f"malformed decimal literal {text!r}")
    return BigReal(ctx.mp.mpf(stripped), ctx)


def _exact_fraction(value) -> Fraction:
    sign, man, exp, _ = value._mpf_
    if not man:
        return Fraction(0)
    magnitude = Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    return -magnitude if sign else magnitude


def _decimal_exponent(q: Fraction) -> int:
    """floor(log10 q) for a positive rational, computed exactly."""
    estimate = (q.numerator.bit_length() - q.denominator.bit_length()) * 30103 // 100000
    while q >= Fraction(10) ** (estimate + 1):
        estimate += 1
    while q < Fraction(10) ** estimate:
        estimate -= 1
    return estimate


def format_scientific(x: BigReal, sig_digits: int) -> str:
    """Round-to-nearest (ties to even) scientific notation, e.g. ``2.50e-1``."""
    if sig_digits < 1:
        raise ValueError("sig_digits must be >= 1")
    q = _exact_fraction(x.value)
    if q == 0:
        return "0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    exponent = _decimal_exponent(q)
    scaled = q / Fraction(10) ** (exponent - sig_digits + 1)
    digits = round(scaled)  # Fraction.__round__ rounds half to even
    if digits == 10**sig_digits:
        digits //= 10
        exponent += 1
    text = str(digits)
    mantissa = text[0] if sig_digits == 1 else f"{text[0]}.{text[1:]}"
    return f"{sign}{mantissa}e{exponent:+d}"
