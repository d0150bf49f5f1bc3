"""Named, fully parameterized methods."""

from __future__ import annotations

import logging
from dataclasses import replace
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable

from rootlab.config import DEFAULT_KAPPA
from rootlab.errors import UnknownMethod
from rootlab.schemes import families, reference
from rootlab.schemes.core import Kind, MethodScheme, WeightFn, validate_weight

logger = logging.getLogger(__name__)

F = Fraction
DERIVATIVE_BASED = Kind.DERIVATIVE_BASED
DERIVATIVE_FREE = Kind.DERIVATIVE_FREE
# weight coefficients a1..aN and b1..bN that SK1 exposes
SK1_TERMS = 4


# -- weights ------------------------------------------------------------------------


def _fd1_weights(h2_slope: Fraction, h3_slope: Fraction) -> dict[str, WeightFn]:
    return {
        "G": WeightFn("G", ("t1",), lambda t1: 1 / (1 - 2 * t1), {(0,): F(1), (1,): F(2)}, "1/(1-2*t1)"),
        "H": WeightFn(
            "H",
            ("t1", "t2", "t3"),
            lambda t1, t2, t3: (1 + h2_slope * t2) / ((1 - 2 * t1 - t1**2) * (1 - h3_slope * t3)),
            {(0, 0, 0): F(1), (1, 0, 0): F(2)},
            f"1/(1-2*t1-t1^2) * (1+{h2_slope}*t2) * 1/(1-{h3_slope}*t3)",
        ),
    }


def _fd1_m2_weights() -> dict[str, WeightFn]:
    weights = _fd1_weights(F(21, 10), F(1))
    # d2G/dt1^2(0) = 8, so the seventh-order conditions pin H_t1t1 = 10 and H_t3 = 1
    conditions = dict(weights["H"].conditions)
    conditions.update({(2, 0, 0): F(10), (0, 0, 1): F(1)})
    weights["H"] = WeightFn("H", weights["H"].args, weights["H"].fn, conditions, weights["H"].formula)
    return weights


def _fd2_weights(fn: Callable[[Any], Any], formula: str) -> dict[str, WeightFn]:
    return {"A": WeightFn("A", ("t1",), fn, {(0,): F(1), (1,): F(2)}, formula)}


def _g0(fn, formula):
    return WeightFn("G0", ("t1",), fn, {(0,): F(1), (1,): F(1)}, formula)


def _g1(fn, formula):
    return WeightFn("G1", ("t2",), fn, {(0,): F(1), (1,): F(1)}, formula)


def _g2(fn, formula):
    return WeightFn("G2", ("t1", "t2"), fn, {(0, 0): F(1), (1, 0): F(1), (0, 1): F(1)}, formula)


def _h(fn, formula, seventh: bool):
    conditions = {(0, 0, 0): F(1)}
    if seventh:
        conditions[(0, 0, 1)] = F(0)
    return WeightFn("H", ("t3", "t4", "t5"), fn, conditions, formula)


def _damped_h():
    return _h(lambda t3, t4, t5: 1 / (1 - t5 / 10), "1/(1-t5/10)", seventh=False)


# -- builders -----------------------------------------------------------------------


def _newton() -> MethodScheme:
    return MethodScheme("NM", DERIVATIVE_BASED, 2, 2, families.newton_step, description="Newton")


def _steffensen() -> MethodScheme:
    return MethodScheme(
        "SM", DERIVATIVE_FREE, 2, 2, families.steffensen_step, {"kappa": DEFAULT_KAPPA}, description="Steffensen"
    )


def _derivative_based(name, step, params=None, weights=None, order=6, family=None, description=""):
    return MethodScheme(name, DERIVATIVE_BASED, 4, order, step, params or {}, weights or {}, family, description)


def _derivative_free(name, step, params=None, weights=None, order=6, family=None, description="", kappa=None):
    merged = {"kappa": DEFAULT_KAPPA if kappa is None else F(kappa)}
    merged.update(params or {})
    return MethodScheme(name, DERIVATIVE_FREE, 4, order, step, merged, weights or {}, family, description)


_BUILDERS: dict[str, Callable[[], MethodScheme]] = {
    "NM": _newton,
    "SM": _steffensen,
    "SG": lambda: _derivative_based("SG", reference.sharma_guha_step, {"a": F(-1)}, description="Sharma-Guha"),
    "NT1": lambda: _derivative_based("NT1", reference.neta_step, {"a": F(-1)}, description="Neta, King-type"),
    "NT2": lambda: _derivative_based("NT2", reference.neta_squared_step, description="Neta, squared weights"),
    "CH": lambda: _derivative_based(
        "CH",
        reference.chun_ham_step,
        weights={"H": WeightFn("H", ("t1",), lambda t1: 1 + 2 * t1, {(0,): F(1), (1,): F(2)}, "1+2*t1")},
        description="Chun-Ham",
    ),
    "GR": lambda: _derivative_based("GR", reference.grau_step, description="Grau-Diaz-Barrero"),
    "AL": lambda: _derivative_based(
        "AL", reference.cordero_step, {"theta": F(-101, 100)}, description="Cordero-Hueso-Martinez-Torregrosa"
    ),
    "SK1": lambda: _derivative_based(
        "SK1",
        reference.khattri_step,
        {
            "m": F(1),
            "l": F(1),
            "mu1": F(1),
            "mu2": F(0),
            **{f"a{j}": F(2 if j == 1 else 0) for j in range(1, SK1_TERMS + 1)},
            **{f"b{k}": F(2 if k == 1 else 0) for k in range(1, SK1_TERMS + 1)},
        },
        description="Khattri-Argyros unification",
    ),
    "SK2M1": lambda: _derivative_free(
        "SK2M1", reference.khattri_argyros_step, {"alpha": F(5, 2), "beta": F(5, 2), "eta": F(1)},
        description="Khattri-Argyros, derivative-free",
    ),
    "SK2M2": lambda: _derivative_free(
        "SK2M2", reference.khattri_argyros_step, {"alpha": F(1), "beta": F(1), "eta": F(1)},
        description="Khattri-Argyros, derivative-free",
    ),
    "TS1": lambda: _derivative_free("TS1", reference.thukral_step, {"lam": F(1)}, kappa=-1, description="Thukral"),
    "TS2": lambda: _derivative_free(
        "TS2", reference.thukral_secant_step, {"lam": F(1)}, kappa=-1, description="Thukral, secant third step"
    ),
    "FS1": lambda: _derivative_free("FS1", reference.fs_weighted_step, kappa=-1, description="weighted Steffensen"),
    "FS2": lambda: replace(
        _derivative_free("FS2", reference.fs_newton_like_step, description="Newton-like divided differences"),
        aliases={"beta": "kappa"},
    ),
    "FS3-1": lambda: _derivative_free(
        "FS3-1", reference.fs3_plus_step, {"gamma": F(0), "delta": F(0)}, order=7, kappa=-1
    ),
    "FS3-2": lambda: _derivative_free("FS3-2", reference.fs3_minus_step, {"rho": F(0), "tau": F(0)}, order=7, kappa=1),
    "FS4-1": lambda: _derivative_free(
        "FS4-1", reference.fs4_plus_step, {"omega": F(0), "phi": F(0)}, order=7, kappa=-1
    ),
    "FS4-2": lambda: _derivative_free("FS4-2", reference.fs4_minus_step, order=7, kappa=1),
    "FD1-M1": lambda: _derivative_based(
        "FD1-M1", families.fd1_step, weights=_fd1_weights(F(2), F(11, 10)), family="FD1"
    ),
    "FD1-M2": lambda: _derivative_based("FD1-M2", families.fd1_step, weights=_fd1_m2_weights(), order=7, family="FD1"),
    "FD2-M1": lambda: _derivative_based(
        "FD2-M1", families.fd2_step, weights=_fd2_weights(lambda t1: 1 / (1 - t1) ** 2, "1/(1-t1)^2"),
        order=7, family="FD2",
    ),
    "AL1": lambda: _derivative_based(
        "AL1", families.fd2_step, weights=_fd2_weights(lambda t1: (1 + t1) / (1 - t1), "(1+t1)/(1-t1)"),
        order=7, family="FD2",
    ),
    "FD4": lambda: _derivative_free(
        "FD4",
        families.fd4_step,
        {"g1": F(0), "g2": F(1), "h1": F(0), "h2": F(1, 2), "h3": F(0), "h4": F(0), "h5": F(0)},
        {
            "G2": _g2(lambda t1, t2: (1 + t1 - t2) / (1 - 2 * t2), "(1+t1-t2)/(1-2*t2)"),
            "S0": WeightFn(
                "S0", ("t3", "t4", "t5"), lambda t3, t4, t5: 1 / (1 - t5 - 2 * t3 - 2 * t4),
                {(0, 0, 0): F(1)}, "1/(1-t5-2*t3-2*t4)",
            ),
            "S2": WeightFn(
                "S2", ("t2", "t3", "t4", "t5"), lambda t2, t3, t4, t5: (1 - 2 * t2) / (1 - 3 * t2),
                {(0, 0, 0, 0): F(1), (1, 0, 0, 0): F(1)}, "(1-2*t2)/(1-3*t2)",
            ),
        },
        family="FD4",
    ),
    "FD5": lambda: _derivative_free(
        "FD5",
        families.fd5_step,
        {"g1": F(1), "g2": F(0), "h": F(0)},
        {"G1": _g1(lambda t2: 1 / (1 - t2), "1/(1-t2)"), "H": _damped_h()},
        family="FD5",
    ),
    "FD6": lambda: _derivative_free(
        "FD6",
        families.fd6_step,
        {"g1": F(0), "g2": F(1)},
        {"G2": _g2(lambda t1, t2: (1 - t1 + t2) / (1 - 2 * t1), "(1-t1+t2)/(1-2*t1)"), "H": _damped_h()},
        family="FD6",
    ),
    "FD7": lambda: _derivative_free(
        "FD7",
        families.fd5_step,
        {"g1": F(0), "g2": F(0), "h": F(1)},
        {
            "G0": _g0(lambda t1: (1 - 2 * t1) / (1 - 3 * t1), "(1-2*t1)/(1-3*t1)"),
            "H": _h(lambda t3, t4, t5: 1 / (1 - t3), "1/(1-t3)", seventh=True),
        },
        order=7,
        family="FD5",
    ),
}

METHOD_NAMES: tuple[str, ...] = tuple(_BUILDERS)
_CANONICAL = {name.upper(): name for name in METHOD_NAMES}


@lru_cache(maxsize=None)
def _validated(name: str) -> MethodScheme:
    method = _BUILDERS[name]()
    for weight in method.weights.values():
        validate_weight(weight)
    logger.debug("registered %s (p=%d, d=%d)", name, method.claimed_order, method.evals_per_iteration)
    return method


def canonical_name(name: str) -> str:
    try:
        return _CANONICAL[name.strip().upper()]
    except KeyError:
        raise UnknownMethod(name=name) from None


def builtin_method(name: str, **overrides: Any) -> MethodScheme:
    """Look up a registered method, optionally overriding parameters.

    Raises:
        UnknownMethod: ``name`` is not registered.
        UnknownParameter: An override names a parameter the method lacks.
    """
    method = _validated(canonical_name(name))
    return method.with_params(**overrides) if overrides else method
