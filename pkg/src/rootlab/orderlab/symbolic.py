"""Run the shared steppers on error series instead of numbers.

Points are root offsets (x_n - alpha = e, y_n - alpha, ...) and function
values are Taylor compositions, so a stepper's output is the error series
of x_{n+1} in powers of e. The offset parameter kappa is carried through
the unit symbol nu = 1 - kappa*c1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from rootlab.errors import RootlabError
from rootlab.orderlab.poly import ONE, Poly, c
from rootlab.orderlab.series import Series, compose_f, homogeneous
from rootlab.orderlab.weights import GenericWeight
from rootlab.schemes import families
from rootlab.schemes.core import Kind, Stepper
from rootlab.schemes.registry import builtin_method

logger = logging.getLogger(__name__)

NU = Poly.symbol("nu")
KAPPA = (ONE - NU) / c(1)

# truncation used when a condition set claims no order
EXPLORATORY_TRUNCATION = 5


class SeriesEvaluator:
    """Evaluator over root-offset series; nothing ever settles or vanishes."""

    def __init__(self, truncation: int):
        self.truncation = truncation
        self._values: dict[int, tuple[Series, Series]] = {}
        self._slopes: dict[int, tuple[Series, Series]] = {}
        self._powers: dict[int, tuple[Series, list[Series]]] = {}

    def start(self) -> Series:
        return Series.variable(self.truncation)

    def f(self, point: Series) -> Series:
        if id(point) not in self._values:
            self._values[id(point)] = (point, compose_f(point))
        return self._values[id(point)][1]

    def df(self, point: Series) -> Series:
        if id(point) not in self._slopes:
            self._slopes[id(point)] = (point, compose_f(point, derivative=True))
        return self._slopes[id(point)][1]

    def _powers_of(self, point: Series, m: int) -> list[Series]:
        _, powers = self._powers.setdefault(id(point), (point, [Series.constant(1, self.truncation)]))
        while len(powers) <= m:
            powers.append(powers[-1] * point)
        return powers

    def dd(self, a: Series, b: Series) -> Series:
        """c1 * (1 + sum_k c_k h_{k-1}(a, b)); exact, with no division by b - a."""
        top = self.truncation
        pa, pb = self._powers_of(a, top), self._powers_of(b, top)
        total = Series.constant(1, self.truncation)
        for k in range(2, top + 2):
            total = total + homogeneous(pa, pb, k - 1) * c(k)
        return total * c(1)

    def dd2(self, z: Series, x: Series) -> Series:
        """f[z, x, x] = c1 * sum_k c_k sum_i (k-1-i) z^i x^(k-2-i)."""
        top = self.truncation
        pz, px = self._powers_of(z, top), self._powers_of(x, top)
        total = Series([], truncation=self.truncation)
        for k in range(2, top + 3):
            inner = Series([], truncation=self.truncation)
            for i in range(k - 1):
                inner = inner + pz[i] * px[k - 2 - i] * (k - 1 - i)
            total = total + inner * c(k)
        return total * c(1)

    def settled(self, before: Any, after: Any) -> bool:
        return False

    def vanishes(self, value: Any) -> bool:
        return False

    def guarded(self, x: Series) -> tuple["SeriesEvaluator", Series]:
        return self, x


# -- families -----------------------------------------------------------------------


@dataclass(frozen=True)
class ConditionSet:
    """Pinned weight derivatives and parameter values with the order they should give."""

    name: str
    derivatives: Mapping[str, Mapping[tuple[int, ...], Any]]
    parameters: Mapping[str, Any] = field(default_factory=dict)
    claimed_order: int | None = None

    def describe(self) -> list[str]:
        lines = []
        for weight, pinned in self.derivatives.items():
            for index, value in sorted(pinned.items()):
                label = "(0)" if not any(index) else str(index)
                lines.append(f"d{label} {weight} = {value}")
        lines.extend(f"{name} = {value}" for name, value in self.parameters.items())
        return lines


@dataclass(frozen=True)
class FamilySpec:
    name: str
    stepper: Stepper
    kind: Kind
    weights: Mapping[str, tuple[tuple[str, ...], int]]
    parameters: tuple[str, ...]
    names: Mapping[str, Mapping[tuple[int, ...], str]]
    condition_sets: Mapping[str, ConditionSet]


class UnknownConditionSet(RootlabError):
    pass


def _values_only(spec_weights: Mapping[str, tuple[tuple[str, ...], int]]) -> dict[str, dict]:
    return {name: {(0,) * len(args): 1} for name, (args, _) in spec_weights.items()}


def _first_order(args: tuple[str, ...], *slopes: str) -> dict[tuple[int, ...], Fraction]:
    """W(0) = 1 and dW/dt(0) = 1 for each named argument."""
    pinned = {(0,) * len(args): Fraction(1)}
    for name in slopes:
        pinned[tuple(int(a == name) for a in args)] = Fraction(1)
    return pinned


M0 = Poly.symbol("M0")

_FD1_WEIGHTS = {"G": (("t1",), 2), "H": (("t1", "t2", "t3"), 4)}
_FD1_BASE = {"G": {(0,): 1, (1,): 2}, "H": {(0, 0, 0): 1, (1, 0, 0): 2}}

_FD2_WEIGHTS = {"A": (("t1",), 2)}

_G_WEIGHTS = {"G0": (("t1",), 2), "G1": (("t2",), 2), "G2": (("t1", "t2"), 2)}
_G_BASE = {
    "G0": _first_order(("t1",), "t1"),
    "G1": _first_order(("t2",), "t2"),
    "G2": _first_order(("t1", "t2"), "t1", "t2"),
}
_G_NAMES_FOURTH = {"G0": {(2,): "L1"}, "G1": {(2,): "M1"}, "G2": {(2, 0): "N1", (0, 2): "N2"}}
_G_NAMES_SEVENTH = {"G0": {(2,): "a1"}, "G1": {(2,): "a2"}, "G2": {(2, 0): "a3", (0, 2): "a4", (1, 1): "a5"}}

_S_ARGS = {
    "S0": ("t3", "t4", "t5"),
    "S1": ("t1", "t3", "t4", "t5"),
    "S2": ("t2", "t3", "t4", "t5"),
    "S3": ("t2", "t3", "t4", "t5"),
    "S4": ("t1", "t3", "t4", "t5"),
    "S5": ("t1", "t2", "t3", "t4", "t5"),
}
_S_SLOPES = {"S0": (), "S1": ("t1",), "S2": ("t2",), "S3": ("t2",), "S4": ("t1",), "S5": ("t1", "t2")}


def _s_names() -> dict[str, dict[tuple[int, ...], str]]:
    names: dict[str, dict[tuple[int, ...], str]] = {
        "S0": {(1, 0, 0): "a1", (0, 1, 0): "a2", (0, 0, 1): "a3"}
    }
    counter = 1
    for weight in ("S1", "S2", "S3", "S4", "S5"):
        args = _S_ARGS[weight]
        entries: dict[tuple[int, ...], str] = {}
        quadratic = [a for a in ("t1", "t2") if a in args]
        for arg in quadratic + ["t3", "t4", "t5"]:
            power = 2 if arg in quadratic else 1
            entries[tuple(power if a == arg else 0 for a in args)] = f"b{counter}"
            counter += 1
        names[weight] = entries
    return names


_H_WEIGHTS = {"H": (("t3", "t4", "t5"), 4)}
_H_NAMES = {"H": {(1, 0, 0): "a6", (0, 1, 0): "a7", (0, 0, 1): "a8"}}


FAMILIES: dict[str, FamilySpec] = {
    "FD1": FamilySpec(
        "FD1",
        families.fd1_step,
        Kind.DERIVATIVE_BASED,
        _FD1_WEIGHTS,
        (),
        {
            "G": {(2,): "M0", (3,): "M1", (4,): "M2"},
            "H": {(0, 1, 0): "R0", (0, 0, 1): "R1", (2, 0, 0): "R2", (0, 2, 0): "R3", (0, 0, 2): "R4"},
        },
        {
            "base": ConditionSet("base", _FD1_BASE, claimed_order=6),
            "seventh": ConditionSet(
                "seventh",
                {"G": _FD1_BASE["G"], "H": {**_FD1_BASE["H"], (2, 0, 0): 2 * M0 + 2, (0, 0, 1): 1}},
                claimed_order=7,
            ),
            "none": ConditionSet("none", _values_only(_FD1_WEIGHTS)),
        },
    ),
    "FD2": FamilySpec(
        "FD2",
        families.fd2_step,
        Kind.DERIVATIVE_BASED,
        _FD2_WEIGHTS,
        (),
        {"A": {(1,): "M0", (2,): "M1", (3,): "M2"}},
        {
            "base": ConditionSet("base", {"A": {(0,): 1}}, claimed_order=6),
            "seventh": ConditionSet("seventh", {"A": {(0,): 1, (1,): 2}}, claimed_order=7),
            "none": ConditionSet("none", _values_only(_FD2_WEIGHTS)),
        },
    ),
    "FD3": FamilySpec(
        "FD3",
        families.fd3_step,
        Kind.DERIVATIVE_FREE,
        _G_WEIGHTS,
        ("g0", "g1", "g2"),
        _G_NAMES_FOURTH,
        {
            "base": ConditionSet(
                "base", _G_BASE, {"g0": 1 - Poly.symbol("g1") - Poly.symbol("g2")}, claimed_order=4
            ),
            "none": ConditionSet("none", _values_only(_G_WEIGHTS)),
        },
    ),
    "FD4": FamilySpec(
        "FD4",
        families.fd4_step,
        Kind.DERIVATIVE_FREE,
        {**_G_WEIGHTS, **{name: (args, 4) for name, args in _S_ARGS.items()}},
        ("g1", "g2", "h1", "h2", "h3", "h4", "h5"),
        {**_G_NAMES_FOURTH, **_s_names()},
        {
            "base": ConditionSet(
                "base",
                {**_G_BASE, **{name: _first_order(args, *_S_SLOPES[name]) for name, args in _S_ARGS.items()}},
                claimed_order=6,
            ),
            "none": ConditionSet(
                "none", _values_only({**_G_WEIGHTS, **{name: (args, 4) for name, args in _S_ARGS.items()}})
            ),
        },
    ),
    "FD5": FamilySpec(
        "FD5",
        families.fd5_step,
        Kind.DERIVATIVE_FREE,
        {**_G_WEIGHTS, **_H_WEIGHTS},
        ("g1", "g2", "h"),
        {**_G_NAMES_SEVENTH, **_H_NAMES},
        {
            "base": ConditionSet("base", {**_G_BASE, "H": {(0, 0, 0): 1}}, claimed_order=6),
            "seventh": ConditionSet("seventh", {**_G_BASE, "H": {(0, 0, 0): 1, (0, 0, 1): 0}}, claimed_order=7),
            "none": ConditionSet("none", _values_only({**_G_WEIGHTS, **_H_WEIGHTS})),
        },
    ),
    "FD6": FamilySpec(
        "FD6",
        families.fd6_step,
        Kind.DERIVATIVE_FREE,
        {**_G_WEIGHTS, **_H_WEIGHTS},
        ("g1", "g2"),
        {**_G_NAMES_SEVENTH, **_H_NAMES},
        {
            "base": ConditionSet("base", {**_G_BASE, "H": {(0, 0, 0): 1}}, claimed_order=6),
            "none": ConditionSet("none", _values_only({**_G_WEIGHTS, **_H_WEIGHTS})),
        },
    ),
}


def condition_set(family: str, name: str) -> ConditionSet:
    spec = FAMILIES[family.upper()]
    try:
        return spec.condition_sets[name]
    except KeyError:
        raise UnknownConditionSet(
            f"{spec.name} has no condition set {name!r}; expected one of {', '.join(spec.condition_sets)}"
        ) from None


def family_setup(
    family: str, conditions: str = "base", truncation: int | None = None, extra_terms: int = 0
) -> tuple[FamilySpec, ConditionSet, int, dict[str, Any], dict[str, GenericWeight]]:
    """Symbolic parameters and generic weights for one family under one condition set."""
    spec = FAMILIES[family.upper()]
    chosen = condition_set(spec.name, conditions)
    if truncation is None:
        truncation = chosen.claimed_order + 1 if chosen.claimed_order else EXPLORATORY_TRUNCATION
    params: dict[str, Any] = {}
    if spec.kind is Kind.DERIVATIVE_FREE:
        params["kappa"] = KAPPA
    for name in spec.parameters:
        params[name] = Poly.lift(chosen.parameters.get(name, Poly.symbol(name)))
    weights = {
        name: GenericWeight(
            name,
            args,
            offset,
            chosen.derivatives.get(name, {}),
            spec.names.get(name, {}),
            extra_terms,
        )
        for name, (args, offset) in spec.weights.items()
    }
    return spec, chosen, truncation, params, weights


def error_series(
    target: str, conditions: str = "base", truncation: int | None = None, extra_terms: int = 0
) -> Series:
    """Error series of x_{n+1} for a family (under a condition set) or a registered method.

    Raises:
        NonInvertibleLeadingCoefficient: The scheme divides by something that can vanish.
        UnknownMethod: ``target`` is neither a family nor a registered method.
    """
    key = target.strip().upper()
    if key in FAMILIES:
        spec, _, truncation, params, weights = family_setup(key, conditions, truncation, extra_terms)
        step, label = spec.stepper, f"{spec.name}/{conditions}"
    else:
        method = builtin_method(target)
        if truncation is None:
            truncation = method.claimed_order + 1
        params = dict(method.params)
        if "kappa" in params:
            params["kappa"] = KAPPA
        weights = dict(method.weights)
        step, label = method.stepper, method.name
    ev = SeriesEvaluator(truncation)
    logger.debug("expanding %s through e^%d", label, truncation)
    return step(ev, ev.start(), params, weights)


def newton_substep_series(truncation: int = 6) -> Series:
    """y - alpha for y = x - f(x)/f'(x)."""
    ev = SeriesEvaluator(truncation)
    x = ev.start()
    return x - ev.f(x) / ev.df(x)


def f_at_newton_substep(truncation: int = 6) -> Series:
    return compose_f(newton_substep_series(truncation))
