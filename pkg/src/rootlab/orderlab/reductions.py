"""Special parameter choices under which a family reproduces a published method.

Each reduction expands both sides with the symbolic evaluator and compares
the error series coefficient by coefficient.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

from rootlab.orderlab.poly import Poly, symbols
from rootlab.orderlab.series import Series
from rootlab.orderlab.symbolic import KAPPA, SeriesEvaluator
from rootlab.schemes import families, reference
from rootlab.schemes.core import WeightFn

logger = logging.getLogger(__name__)

REDUCTION_TRUNCATION = 7

a, theta, alpha, beta, eta, a1, b1, mu1, mu2 = symbols("a theta alpha beta eta a1 b1 mu1 mu2")
lam = Poly.symbol("lam")

ZERO_H = {f"h{i}": 0 for i in range(1, 6)}


@dataclass(frozen=True)
class ReductionResult:
    name: str
    agrees: bool
    through: int


@dataclass(frozen=True)
class Reduction:
    name: str
    family: Callable[[SeriesEvaluator], Series]
    method: Callable[[SeriesEvaluator], Series]
    description: str = ""


def _w(name: str, args: tuple[str, ...], fn) -> WeightFn:
    return WeightFn(name, args, fn)


def _one(*_):
    return 1


def _ostrowski(t1):
    return 1 / (1 - 2 * t1)


def _king(t1):
    return (1 + a * t1) / (1 + (a - 2) * t1)


def _khattri_argyros_bracket(t1, t2):
    return 1 + t1 + alpha * t1**2 + t2 + beta * t2**2


def _thukral_weight(t2, *_):
    return (1 - t2 / lam) ** (-lam)


def _fd1(G, H):
    weights = {"G": _w("G", ("t1",), G), "H": _w("H", ("t1", "t2", "t3"), H)}
    return lambda ev: families.fd1_step(ev, ev.start(), {}, weights)


def _derivative_based(step, params=None, weights=None):
    return lambda ev: step(ev, ev.start(), params or {}, weights or {})


def _derivative_free(step, params=None, weights=None):
    merged = {"kappa": KAPPA, **(params or {})}
    return lambda ev: step(ev, ev.start(), merged, weights or {})


def _khattri_argyros_z(ev):
    params = {"kappa": KAPPA, "alpha": alpha, "beta": beta}
    return reference.khattri_argyros_predictor(ev, ev.start(), params)[-1]


def _thukral_z(ev):
    return reference.thukral_predictor(ev, ev.start(), {"kappa": KAPPA, "lam": lam})[-1]


_G1_THUKRAL = _w("G1", ("t2",), lambda t2: (1 - t2 / lam) ** (-lam))
_G2_KHATTRI_ARGYROS = _w("G2", ("t1", "t2"), _khattri_argyros_bracket)

REDUCTIONS: tuple[Reduction, ...] = (
    Reduction(
        "FD1=>SG",
        _fd1(_ostrowski, lambda t1, t2, t3: _king(t1)),
        _derivative_based(reference.sharma_guha_step, {"a": a}),
        "G = 1/(1-2t1), H = (1+a t1)/(1+(a-2) t1)",
    ),
    Reduction(
        "FD1=>NT1",
        _fd1(_king, lambda t1, t2, t3: (1 - t1) / (1 - 3 * t1)),
        _derivative_based(reference.neta_step, {"a": a}),
        "G = (1+a t1)/(1+(a-2) t1), H = (1-t1)/(1-3t1)",
    ),
    Reduction(
        "FD1=>NT2",
        _fd1(lambda t1: 1 / (1 - t1) ** 2, lambda t1, t2, t3: 1 / (1 - t1 - t2) ** 2),
        _derivative_based(reference.neta_squared_step),
        "G = 1/(1-t1)^2, H = 1/(1-t1-t2)^2",
    ),
    Reduction(
        "FD1=>CH",
        _fd1(_ostrowski, lambda t1, t2, t3: 1 + 2 * t1),
        _derivative_based(reference.chun_ham_step, weights={"H": _w("H", ("t1",), lambda t1: 1 + 2 * t1)}),
        "G = 1/(1-2t1), H = 1+2t1",
    ),
    Reduction(
        "FD1=>GR",
        _fd1(_ostrowski, lambda t1, t2, t3: _ostrowski(t1)),
        _derivative_based(reference.grau_step),
        "G = H = 1/(1-2t1)",
    ),
    Reduction(
        "FD1=>SK1",
        _fd1(lambda t1: 1 + a1 * t1, lambda t1, t2, t3: 1 + b1 * (mu1 * t1 + mu2 * t2)),
        _derivative_based(
            reference.khattri_step, {"m": 1, "l": 1, "a1": a1, "b1": b1, "mu1": mu1, "mu2": mu2}
        ),
        "G = 1+a1 t1, H = 1+b1(mu1 t1+mu2 t2)",
    ),
    Reduction(
        "FD2=>AL",
        _derivative_based(families.fd2_step, weights={"A": _w("A", ("t1",), lambda t1: (1 - theta * t1) / (1 - t1))}),
        _derivative_based(reference.cordero_step, {"theta": theta}),
        "A = (1-theta t1)/(1-t1)",
    ),
    Reduction(
        "FD3=>SK2 predictor",
        _derivative_free(families.fd3_step, {"g0": 0, "g1": 0, "g2": 1}, {"G2": _G2_KHATTRI_ARGYROS}),
        _khattri_argyros_z,
        "g2 = 1, G2 = 1+t1+alpha t1^2+t2+beta t2^2",
    ),
    Reduction(
        "FD3=>TS predictor",
        _derivative_free(families.fd3_step, {"g0": 0, "g1": 1, "g2": 0}, {"G1": _G1_THUKRAL}),
        _thukral_z,
        "g1 = 1, G1 = (1-t2/lam)^(-lam)",
    ),
    Reduction(
        "FD4=>TS1",
        _derivative_free(
            families.fd4_step,
            {"g1": 1, "g2": 0, **ZERO_H, "h3": 1},
            {"G1": _G1_THUKRAL, "S3": _w("S3", ("t2", "t3", "t4", "t5"), _thukral_weight)},
        ),
        _derivative_free(reference.thukral_step, {"lam": lam}),
        "g1 = 1, h3 = 1, S3 = (1-t2/lam)^(-lam)",
    ),
    Reduction(
        "FD4=>TS2",
        _derivative_free(
            families.fd4_step,
            {"g1": 1, "g2": 0, **ZERO_H},
            {"G1": _G1_THUKRAL, "S0": _w("S0", ("t3", "t4", "t5"), _one)},
        ),
        _derivative_free(reference.thukral_secant_step, {"lam": lam}),
        "g1 = 1, h1..h5 = 0, S0 = 1",
    ),
    Reduction(
        "FD4=>SK2",
        _derivative_free(
            families.fd4_step,
            {"g1": 0, "g2": 1, **ZERO_H, "h5": 1},
            {
                "G2": _G2_KHATTRI_ARGYROS,
                "S5": _w(
                    "S5",
                    ("t1", "t2", "t3", "t4", "t5"),
                    lambda t1, t2, t3, t4, t5: _khattri_argyros_bracket(t1, t2) + eta * t5,
                ),
            },
        ),
        _derivative_free(reference.khattri_argyros_step, {"alpha": alpha, "beta": beta, "eta": eta}),
        "g2 = 1, h5 = 1, S5 = 1+t1+alpha t1^2+t2+beta t2^2+eta t5",
    ),
    Reduction(
        "FD5=>FS2",
        _derivative_free(
            families.fd5_step,
            {"g1": 0, "g2": 0, "h": 0},
            {"G0": _w("G0", ("t1",), _one), "H": _w("H", ("t3", "t4", "t5"), _one)},
        ),
        _derivative_free(reference.fs_newton_like_step),
        "h = 0, g1 = g2 = 0, G0 = 1, H = 1",
    ),
)

REDUCTION_NAMES = tuple(reduction.name for reduction in REDUCTIONS)


def check_reduction(reduction: Reduction, truncation: int = REDUCTION_TRUNCATION) -> ReductionResult:
    left = reduction.family(SeriesEvaluator(truncation))
    right = reduction.method(SeriesEvaluator(truncation))
    agrees = left.agrees_with(right)
    through = min(left.precision, right.precision) - 1
    logger.info("%s: %s through e^%d", reduction.name, "agrees" if agrees else "differs", through)
    return ReductionResult(reduction.name, agrees, through)


def check_all(truncation: int = REDUCTION_TRUNCATION) -> list[ReductionResult]:
    return [check_reduction(reduction, truncation) for reduction in REDUCTIONS]
