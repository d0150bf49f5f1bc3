"""Sparse multivariate polynomials over the rationals.

A handful of symbols (c1, c2, nu, lam) are treated as units: they are known
to be nonzero, may carry negative exponents, and monomials built from them
alone can be inverted. Everything else is an ordinary polynomial variable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Union

import sympy

from rootlab.errors import NonInvertibleLeadingCoefficient

Monomial = tuple[tuple[str, int], ...]
Scalar = Union[int, Fraction]

UNIT_SYMBOLS = frozenset({"c1", "c2", "nu", "lam"})

_NAME = re.compile(r"^([A-Za-z]+)_?(\d*)(.*)$")


@lru_cache(maxsize=None)
def symbol_key(name: str) -> tuple:
    """Canonical ordering: c1, c2, ... first, then nu, lam, then the rest by name."""
    match = _NAME.match(name)
    prefix, digits, rest = match.groups() if match else (name, "", "")
    index = int(digits) if digits else 0
    if prefix == "c" and digits and not rest:
        return (0, "", index, "")
    if name in ("nu", "lam", "kappa"):
        return (1, "", ("nu", "lam", "kappa").index(name), "")
    return (2, prefix, index, rest)


@lru_cache(maxsize=1 << 16)
def _merge(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exponents = dict(a)
    for name, power in b:
        exponents[name] = exponents.get(name, 0) + power
    return tuple(sorted(((n, p) for n, p in exponents.items() if p), key=lambda item: symbol_key(item[0])))


def _is_scalar(value) -> bool:
    return isinstance(value, Rational) and not isinstance(value, bool)


def _normalize(value: Scalar) -> Scalar:
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return value


class Poly:
    """Immutable polynomial: a map from monomials to nonzero rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {m: _normalize(c) for m, c in (terms or {}).items() if c}
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- construction -----------------------------------------------------------------

    @classmethod
    def constant(cls, value: Scalar) -> "Poly":
        return cls({(): value})

    @classmethod
    def symbol(cls, name: str, power: int = 1) -> "Poly":
        if power < 0 and name not in UNIT_SYMBOLS:
            raise NonInvertibleLeadingCoefficient(f"{name} is not a unit symbol")
        return cls({((name, power),): 1})

    @staticmethod
    def lift(value) -> "Poly | None":
        if isinstance(value, Poly):
            return value
        if _is_scalar(value):
            return Poly.constant(value)
        return None

    # -- queries ----------------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_term(self) -> Scalar:
        return self.terms.get((), 0)

    def is_unit_monomial(self) -> bool:
        if len(self.terms) != 1:
            return False
        (monomial,) = self.terms
        return all(name in UNIT_SYMBOLS for name, _ in monomial)

    def symbols(self) -> set[str]:
        return {name for monomial in self.terms for name, _ in monomial}

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self.terms), default=0)

    def divisible_by(self, name: str) -> bool:
        """True when every term carries a positive power of ``name``."""
        return bool(self.terms) and all(dict(m).get(name, 0) > 0 for m in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # -- arithmetic -------------------------------------------------------------------

    def __add__(self, other):
        o = Poly.lift(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        terms = dict(self.terms)
        for monomial, coefficient in o.terms.items():
            terms[monomial] = terms.get(monomial, 0) + coefficient
        return Poly(terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = Poly.lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = Poly.lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = Poly.lift(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return ZERO
        if o.is_constant():
            factor = o.constant_term()
            return Poly({m: c * factor for m, c in self.terms.items()})
        terms: dict[Monomial, Scalar] = {}
        for ma, ca in self.terms.items():
            for mb, cb in o.terms.items():
                monomial = _merge(ma, mb)
                terms[monomial] = terms.get(monomial, 0) + ca * cb
        return Poly(terms)

    __rmul__ = __mul__

    def inverse(self) -> "Poly":
        """Inverse of a nonzero constant or a monomial in unit symbols.

        Raises:
            NonInvertibleLeadingCoefficient: Anything else.
        """
        if self.is_constant() and self.terms:
            return Poly.constant(Fraction(1) / Fraction(self.constant_term()))
        if not self.is_unit_monomial():
            raise NonInvertibleLeadingCoefficient(f"cannot invert {self}")
        ((monomial, coefficient),) = self.terms.items()
        return Poly({tuple((n, -p) for n, p in monomial): Fraction(1) / Fraction(coefficient)})

    def __truediv__(self, other):
        o = Poly.lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = Poly.lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison -------------------------------------------------------------------

    def __eq__(self, other):
        o = Poly.lift(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- transformation ---------------------------------------------------------------

    def substitute(self, mapping: Mapping[str, "Poly | Scalar"]) -> "Poly":
        """Replace symbols by polynomials; negative powers need invertible images."""
        images = {name: Poly.lift(value) for name, value in mapping.items()}
        result = ZERO
        for monomial, coefficient in self.terms.items():
            term = Poly.constant(coefficient)
            kept: list[tuple[str, int]] = []
            for name, power in monomial:
                if name in images:
                    term = term * images[name] ** power
                else:
                    kept.append((name, power))
            result = result + term * Poly({tuple(kept): 1})
        return result

    def to_sympy(self) -> sympy.Expr:
        expression = sympy.Integer(0)
        for monomial, coefficient in self.terms.items():
            term = sympy.Rational(coefficient.numerator, coefficient.denominator) if isinstance(
                coefficient, Fraction
            ) else sympy.Integer(coefficient)
            for name, power in monomial:
                term = term * sympy.Symbol(name) ** power
            expression = expression + term
        return expression

    # -- printing ---------------------------------------------------------------------

    def _sorted_terms(self) -> list[tuple[Monomial, Scalar]]:
        def key(item):
            monomial = item[0]
            degree = sum(p for _, p in monomial)
            return (-degree, [(symbol_key(n), -p) for n, p in monomial])

        return sorted(self.terms.items(), key=key)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces: list[str] = []
        for monomial, coefficient in self._sorted_terms():
            factors = [_render_factor(n, p) for n, p in monomial]
            magnitude = abs(coefficient)
            if magnitude != 1 or not factors:
                factors.insert(0, str(magnitude))
            sign = "-" if coefficient < 0 else "+"
            pieces.append(f"{sign} {'*'.join(factors)}")
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"Poly({self})"


def _render_factor(name: str, power: int) -> str:
    if power < 0:
        name, power = f"{name}inv", -power
    return name if power == 1 else f"{name}^{power}"


ZERO = Poly()
ONE = Poly.constant(1)


def symbols(names: str | Iterable[str]) -> tuple[Poly, ...]:
    """``symbols("c2 c3")`` -> (Poly c2, Poly c3)."""
    if isinstance(names, str):
        names = names.split()
    return tuple(Poly.symbol(name) for name in names)


def c(k: int) -> Poly:
    """The normalized Taylor coefficient c_k = f^(k)(alpha) / (k! f'(alpha)); c_1 is f'(alpha)."""
    return Poly.symbol(f"c{k}")
