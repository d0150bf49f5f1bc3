"""The FD1-FD6 families and the one-step methods they are built on.

Each stepper is written once against the :class:`~rootlab.schemes.core.Evaluator`
protocol, so the same code runs on BigReal values and on symbolic error series.
Ratio names follow one convention throughout::

    t1 = f(y)/f(x)   t2 = f(y)/f(w)   t3 = f(z)/f(x)   t4 = f(z)/f(w)   t5 = f(z)/f(y)

FD1 is the exception: its third weight takes t2 = f(z)/f(x) and t3 = f(z)/f(y).
"""

from __future__ import annotations

import logging
from typing import Any, Mapping

from rootlab.bigreal import BigReal
from rootlab.errors import DegenerateNodes, DomainError, FunctionDomainError, SingularStep
from rootlab.funcsuite import EvalCounter, TestFunction
from rootlab.schemes.core import NumericEvaluator, WeightFn, arrive, offset_point, stepper

logger = logging.getLogger(__name__)

Params = Mapping[str, Any]
Weights = Mapping[str, WeightFn]


def _present(coefficient: Any) -> bool:
    return not coefficient == 0


@stepper
def newton_step(ev, x, params: Params, weights: Weights):
    return x - ev.f(x) / ev.df(x)


@stepper
def steffensen_step(ev, x, params: Params, weights: Weights):
    # no later sub-step absorbs the cancellation in f[x, w]
    ev, x = ev.guarded(x)
    fx, w, _ = offset_point(ev, x, params["kappa"])
    return x - fx / ev.dd(x, w)


def newton_predictor(ev, x):
    """(f(x), f'(x), y, f(y)) for the Newton first sub-step."""
    fx, d = ev.f(x), ev.df(x)
    y = x - fx / d
    return fx, d, y, arrive(ev, x, y)


@stepper
def fd1_step(ev, x, params: Params, weights: Weights):
    fx, d, y, fy = newton_predictor(ev, x)
    ratios = {"t1": fy / fx}
    z = y - weights["G"](ratios) * fy / d
    fz = arrive(ev, y, z)
    ratios.update(t2=fz / fx, t3=fz / fy)
    return z - weights["H"](ratios) * fz / d


def hermite_denominator(ev, x, y, z):
    """f[z, y] + f[z, x, x](z - y): slope of the interpolant through y, x, x."""
    return ev.dd(z, y) + ev.dd2(z, x) * (z - y)


@stepper
def fd2_step(ev, x, params: Params, weights: Weights):
    fx, d, y, fy = newton_predictor(ev, x)
    z = y - weights["A"]({"t1": fy / fx}) * fy / d
    fz = arrive(ev, y, z)
    return z - fz / hermite_denominator(ev, x, y, z)


def secant_predictor(ev, x, kappa):
    """Steffensen-type first sub-step: (f(x), w, f(w), y, f(y))."""
    fx, w, fw = offset_point(ev, x, kappa)
    y = x - fx / ev.dd(x, w)
    return fx, w, fw, y, arrive(ev, x, y)


def weighted_correction(ev, x, w, y, fy, ratios, params: Params, weights: Weights, g0):
    """y - [g0 G0/f[y,w] + g1 G1/f[y,x] + g2 G2/f[x,w]] f(y), skipping zero terms."""
    total: Any = 0
    for coefficient, name, (a, b) in (
        (g0, "G0", (y, w)),
        (params["g1"], "G1", (y, x)),
        (params["g2"], "G2", (x, w)),
    ):
        if _present(coefficient):
            total = total + coefficient / ev.dd(a, b) * weights[name](ratios)
    return y - total * fy


def _derivative_free_core(ev, x, params: Params, weights: Weights, g0):
    fx, w, fw, y, fy = secant_predictor(ev, x, params["kappa"])
    ratios = {"t1": fy / fx, "t2": fy / fw}
    z = weighted_correction(ev, x, w, y, fy, ratios, params, weights, g0)
    fz = arrive(ev, y, z)
    ratios.update(t3=fz / fx, t4=fz / fw, t5=fz / fy)
    return fx, w, fw, y, fy, z, fz, ratios


def _normalized_g0(params: Params):
    return 1 - params["g1"] - params["g2"]


@stepper
def fd3_step(ev, x, params: Params, weights: Weights):
    fx, w, fw, y, fy = secant_predictor(ev, x, params["kappa"])
    ratios = {"t1": fy / fx, "t2": fy / fw}
    return weighted_correction(ev, x, w, y, fy, ratios, params, weights, params["g0"])


FD4_NODES = (("S0", "y", "z"), ("S1", "z", "w"), ("S2", "z", "x"), ("S3", "x", "y"), ("S4", "y", "w"), ("S5", "x", "w"))


@stepper
def fd4_step(ev, x, params: Params, weights: Weights):
    _, w, _, y, _, z, fz, ratios = _derivative_free_core(ev, x, params, weights, _normalized_g0(params))
    points = {"x": x, "w": w, "y": y, "z": z}
    h = [params[f"h{i}"] for i in range(1, 6)]
    coefficients = [1 - sum(h), *h]
    total: Any = 0
    for coefficient, (name, a, b) in zip(coefficients, FD4_NODES):
        if _present(coefficient):
            total = total + coefficient / ev.dd(points[a], points[b]) * weights[name](ratios)
    return z - total * fz


@stepper
def fd5_step(ev, x, params: Params, weights: Weights):
    _, w, _, y, _, z, fz, ratios = _derivative_free_core(ev, x, params, weights, _normalized_g0(params))
    h = params["h"]
    denominator = ev.dd(z, y)
    if _present(h - 1):
        denominator = denominator - (h - 1) * ev.dd(z, w) + (h - 1) * ev.dd(y, w)
    if _present(h):
        denominator = denominator + h * ev.dd(z, x) - h * ev.dd(y, x)
    return z - weights["H"](ratios) * fz / denominator


@stepper
def fd6_step(ev, x, params: Params, weights: Weights):
    _, w, _, y, _, z, fz, ratios = _derivative_free_core(ev, x, params, weights, _normalized_g0(params))
    denominator = ev.dd(z, y) + (ev.dd(z, x) - ev.dd(x, w)) * (z - y) / (z - x)
    return z - weights["H"](ratios) * fz / denominator


FAMILY_STEPPERS = {
    "FD1": fd1_step,
    "FD2": fd2_step,
    "FD3": fd3_step,
    "FD4": fd4_step,
    "FD5": fd5_step,
    "FD6": fd6_step,
}


def step_family(
    family: str,
    x: BigReal,
    f: TestFunction,
    params: Params,
    weights: Weights,
    counter: EvalCounter,
) -> BigReal:
    """One full iteration of a family from ``x``.

    Raises:
        SingularStep: A denominator collapsed (coincident nodes or a zero divisor).
        FunctionDomainError: f could not be evaluated at a sub-step point.
    """
    try:
        run = FAMILY_STEPPERS[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILY_STEPPERS)}") from None
    ev = NumericEvaluator(f, counter, x.context)
    try:
        return run(ev, x, params, weights)
    except FunctionDomainError:
        raise
    except (DegenerateNodes, DomainError) as exc:
        logger.debug("%s singular step at %s: %s", family, x, exc)
        raise SingularStep(str(exc)) from exc
