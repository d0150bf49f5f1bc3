"""Published sixth- and seventh-order methods the families are compared against.

Derivative-based methods start with a Newton sub-step, derivative-free ones
with a Steffensen sub-step on w = x - kappa*f(x). Methods that are usually
written with w = x + f(x) carry kappa = -1.
"""

from __future__ import annotations

from rootlab.schemes.core import arrive, stepper
from rootlab.schemes.families import hermite_denominator, newton_predictor, secant_predictor


def _ostrowski_point(fx, fy, d, y):
    return y - fx / (fx - 2 * fy) * fy / d


@stepper
def sharma_guha_step(ev, x, params, weights):
    fx, d, y, fy = newton_predictor(ev, x)
    z = _ostrowski_point(fx, fy, d, y)
    fz = arrive(ev, y, z)
    a = params["a"]
    return z - (fx + a * fy) / (fx + (a - 2) * fy) * fz / d


@stepper
def neta_step(ev, x, params, weights):
    fx, d, y, fy = newton_predictor(ev, x)
    a = params["a"]
    z = y - (fx + a * fy) / (fx + (a - 2) * fy) * fy / d
    fz = arrive(ev, y, z)
    return z - (fx - fy) / (fx - 3 * fy) * fz / d


@stepper
def neta_squared_step(ev, x, params, weights):
    fx, d, y, fy = newton_predictor(ev, x)
    z = y - fy / d / (1 - fy / fx) ** 2
    fz = arrive(ev, y, z)
    return z - fz / d / (1 - fy / fx - fz / fx) ** 2


@stepper
def chun_ham_step(ev, x, params, weights):
    fx, d, y, fy = newton_predictor(ev, x)
    z = _ostrowski_point(fx, fy, d, y)
    fz = arrive(ev, y, z)
    return z - weights["H"]({"t1": fy / fx}) * fz / d


@stepper
def grau_step(ev, x, params, weights):
    fx, d, y, fy = newton_predictor(ev, x)
    z = _ostrowski_point(fx, fy, d, y)
    fz = arrive(ev, y, z)
    return z - fx / (fx - 2 * fy) * fz / d


@stepper
def cordero_step(ev, x, params, weights):
    fx, d, y, fy = newton_predictor(ev, x)
    theta = params["theta"]
    z = x - theta * (fx + fy) / d - (1 - theta) * fx / d * fx / (fx - fy)
    fz = arrive(ev, y, z)
    return z - fz / hermite_denominator(ev, x, y, z)


@stepper
def khattri_step(ev, x, params, weights):
    """Polynomial weights of degree m and l; coefficients that are not set are zero."""
    fx, d, y, fy = newton_predictor(ev, x)
    t1 = fy / fx
    bracket = 1
    for j in range(1, int(params["m"]) + 1):
        bracket = bracket + params.get(f"a{j}", 0) * t1**j
    z = y - fy / d * bracket
    fz = arrive(ev, y, z)
    s = (params["mu1"] * fy + params["mu2"] * fz) / fx
    bracket = 1
    for k in range(1, int(params["l"]) + 1):
        bracket = bracket + params.get(f"b{k}", 0) * s**k
    return z - fz / d * bracket


def khattri_argyros_predictor(ev, x, params):
    """(y, f(y), slope, bracket, z) for the first two sub-steps."""
    fx, w, fw, y, fy = secant_predictor(ev, x, params["kappa"])
    t1, t2 = fy / fx, fy / fw
    slope = ev.dd(x, w)
    bracket = 1 + t1 + params["alpha"] * t1**2 + t2 + params["beta"] * t2**2
    return y, fy, slope, bracket, y - fy / slope * bracket


@stepper
def khattri_argyros_step(ev, x, params, weights):
    y, fy, slope, bracket, z = khattri_argyros_predictor(ev, x, params)
    fz = arrive(ev, y, z)
    return z - fz / slope * (bracket + params["eta"] * fz / fy)


def thukral_predictor(ev, x, params):
    """(y, f(y), weight, slope, z): Steffensen sub-step, then the weighted secant step."""
    fx, w, fw, y, fy = secant_predictor(ev, x, params["kappa"])
    lam = params["lam"]
    weight = (1 - fy / fw / lam) ** (-lam)
    slope = ev.dd(x, y)
    return y, fy, weight, slope, y - weight * fy / slope


@stepper
def thukral_step(ev, x, params, weights):
    y, _, weight, slope, z = thukral_predictor(ev, x, params)
    fz = arrive(ev, y, z)
    return z - weight * fz / slope


@stepper
def thukral_secant_step(ev, x, params, weights):
    y, _, _, _, z = thukral_predictor(ev, x, params)
    fz = arrive(ev, y, z)
    return z - fz / ev.dd(y, z)


@stepper
def fs_weighted_step(ev, x, params, weights):
    fx, w, fw, y, fy = secant_predictor(ev, x, params["kappa"])
    slope = ev.dd(x, w)
    t1 = fy / fx
    z = x - fx / slope * (1 + t1 * (1 + 2 * t1))
    fz = arrive(ev, y, z)
    return z - fz / ev.dd(y, z) * (1 - (1 + slope) / slope * fz / fw)


@stepper
def fs_newton_like_step(ev, x, params, weights):
    _, w, _, y, fy = secant_predictor(ev, x, params["kappa"])
    z = y - fy / ev.dd(w, y)
    fz = arrive(ev, y, z)
    return z - fz / (ev.dd(w, z) + ev.dd(z, y) - ev.dd(w, y))


def _fs_predictor(ev, x, kappa):
    fx, w, fw, y, fy = secant_predictor(ev, x, kappa)
    slope = ev.dd(x, w)
    z = y - fy / (ev.dd(x, y) + ev.dd(y, w) - slope)
    return fx, w, fw, y, fy, slope, z, arrive(ev, y, z)


def _fs3_step(ev, x, kappa, first, second):
    fx, w, fw, y, fy, slope, z, fz = _fs_predictor(ev, x, kappa)
    bracket = (
        1
        + fy / fw
        + fz / fy
        + (2 - kappa * slope) / (1 - kappa * slope) ** 2 * (fy / fx) ** 2
        + first * fz / fx
        + second * fz / fw
    )
    return z - fz / ev.dd(x, z) * bracket


def _fs4_step(ev, x, kappa, first, second):
    fx, w, fw, y, fy, slope, z, fz = _fs_predictor(ev, x, kappa)
    bracket = (
        1
        + fz / fy
        + fy / fx
        + (2 - kappa * slope * (3 - kappa * slope)) * (fy / fw) ** 2
        + first * fz / fx
        + second * fz / fw
    )
    return z - fz / ev.dd(w, z) * bracket


@stepper
def fs3_plus_step(ev, x, params, weights):
    return _fs3_step(ev, x, params["kappa"], params["gamma"], params["delta"])


@stepper
def fs3_minus_step(ev, x, params, weights):
    return _fs3_step(ev, x, params["kappa"], params["rho"], params["tau"])


@stepper
def fs4_plus_step(ev, x, params, weights):
    return _fs4_step(ev, x, params["kappa"], params["omega"], params["phi"])


@stepper
def fs4_minus_step(ev, x, params, weights):
    return _fs4_step(ev, x, params["kappa"], 0, 0)
