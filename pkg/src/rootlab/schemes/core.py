"""Iteration engine: evaluators, divided differences, weight functions and the run loop."""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Mapping, Protocol

from rootlab.bigreal import BigReal, PrecisionContext, format_scientific
from rootlab.errors import (
    DegenerateNodes,
    DomainError,
    FunctionDomainError,
    SingularStep,
    UnknownParameter,
    WeightConditionViolated,
)
from rootlab.funcsuite import EvalCounter, TestFunction, evaluate, evaluate_derivative

logger = logging.getLogger(__name__)

DIVERGENCE_MAGNITUDE = 10**8
DIVERGENCE_GROWTH = 10
DIVERGENCE_RUN = 3
RUNAWAY_FACTOR = 100
VALIDATION_BITS = 256
GUARD_BITS = 64


class Status(str, Enum):
    CONVERGED = "Converged"
    BUDGET_EXHAUSTED = "BudgetExhausted"
    DIVERGENT = "Divergent"
    DEGENERATE_STEP = "DegenerateStep"
    DOMAIN_ERROR = "DomainError"


class Kind(str, Enum):
    DERIVATIVE_BASED = "derivative-based"
    DERIVATIVE_FREE = "derivative-free"


# -- evaluators ---------------------------------------------------------------------


class Evaluator(Protocol):
    """What a stepper may ask of the function it is stepping on.

    Points and values are BigReal for numeric runs and error series for the
    symbolic engine; steppers are written once against this protocol.
    """

    def f(self, point: Any) -> Any: ...

    def df(self, point: Any) -> Any: ...

    def dd(self, a: Any, b: Any) -> Any: ...

    def dd2(self, z: Any, x: Any) -> Any: ...

    def settled(self, before: Any, after: Any) -> bool: ...

    def vanishes(self, value: Any) -> bool: ...

    def guarded(self, x: Any) -> tuple["Evaluator", Any]: ...


class Landed(Exception):
    """Internal signal: the iteration ended early at ``point``."""

    def __init__(self, point: Any):
        super().__init__()
        self.point = point


def arrive(ev: Evaluator, previous: Any, point: Any) -> Any:
    """Return f(point), ending the iteration at ``point`` when it is final.

    A point is final when the correction that produced it is below the
    working-precision noise floor, or when f vanishes there exactly.
    """
    if ev.settled(previous, point):
        raise Landed(point)
    value = ev.f(point)
    if ev.vanishes(value):
        raise Landed(point)
    return value


def offset_point(ev: Evaluator, x: Any, kappa: Any) -> tuple[Any, Any, Any]:
    """w = x - kappa*f(x), returning (f(x), w, f(w))."""
    fx = ev.f(x)
    w = x - kappa * fx
    fw = ev.f(w)
    if ev.vanishes(fw):
        raise Landed(w)
    return fx, w, fw


Stepper = Callable[[Evaluator, Any, Mapping[str, Any], Mapping[str, "WeightFn"]], Any]


def stepper(fn: Stepper) -> Stepper:
    """Decorator for step functions that may end early through :func:`arrive`."""

    @functools.wraps(fn)
    def run(ev, x, params, weights):
        try:
            return fn(ev, x, params, weights)
        except Landed as landed:
            return landed.point

    return run


class NumericEvaluator:
    """Counted f/f' access with a per-iteration value cache.

    A point is charged once per iteration, whatever precision it is
    evaluated at. ``reach`` and ``flat`` record how far the step wandered,
    so that a breakdown can be told apart from a run leaving the basin.
    """

    def __init__(
        self,
        f: TestFunction,
        counter: EvalCounter,
        ctx: PrecisionContext,
        charged: set[tuple[str, tuple]] | None = None,
    ):
        self.function = f
        self.counter = counter
        self.ctx = ctx
        self._values: dict[BigReal, BigReal] = {}
        self._slopes: dict[BigReal, BigReal] = {}
        self._charged = set() if charged is None else charged
        self._noise = ctx.power_of_ten(-ctx.decimal_digits + 4)
        self._guarded: NumericEvaluator | None = None
        self.reach = ctx.zero()
        self.flat = False

    def _touch(self, point: BigReal) -> None:
        if abs(point) > self.reach:
            self.reach = abs(point)

    def _evaluate(self, kind: str, point: BigReal) -> BigReal:
        self._touch(point)
        key = (kind, point.value._mpf_)
        try:
            if key in self._charged:
                return self.function.value(point) if kind == "f" else self.function.slope(point)
            self._charged.add(key)
            if kind == "f":
                return evaluate(self.function, point, self.counter)
            return evaluate_derivative(self.function, point, self.counter)
        except DomainError as exc:
            raise FunctionDomainError(message=str(exc), point=format_scientific(point, 10)) from exc

    def f(self, point: BigReal) -> BigReal:
        cached = self._values.get(point)
        if cached is None:
            cached = self._values[point] = self._evaluate("f", point)
        return cached

    def df(self, point: BigReal) -> BigReal:
        cached = self._slopes.get(point)
        if cached is None:
            cached = self._slopes[point] = self._evaluate("df", point)
        return cached

    def guarded(self, x: BigReal) -> tuple["NumericEvaluator", BigReal]:
        """An evaluator GUARD_BITS wider sharing this one's charges, and x in its context."""
        if self._guarded is None:
            wide = PrecisionContext(self.ctx.bits + GUARD_BITS)
            self._guarded = NumericEvaluator(self.function, self.counter, wide, self._charged)
        return self._guarded, self._guarded.ctx.convert(x)

    def ran_off(self) -> bool:
        """Whether the step reached past the divergence magnitude or onto a plateau of f."""
        if self._guarded is not None and self._guarded.ran_off():
            return True
        return self.flat or self.reach > DIVERGENCE_MAGNITUDE

    def _check_nodes(self, a: BigReal, b: BigReal) -> None:
        self._touch(a)
        self._touch(b)
        scale = abs(a)
        if scale < 1:
            scale = self.ctx.make(1)
        if abs(a - b) < self._noise * scale:
            raise DegenerateNodes(a=format_scientific(a, 10), b=format_scientific(b, 10))

    def dd(self, a: BigReal, b: BigReal) -> BigReal:
        self._check_nodes(a, b)
        fa, fb = self.f(a), self.f(b)
        if fa == fb and not fa.is_zero():
            # f is constant across distinct nodes
            self.flat = True
        return (fb - fa) / (b - a)

    def dd2(self, z: BigReal, x: BigReal) -> BigReal:
        self._check_nodes(z, x)
        return (self.dd(z, x) - self.df(x)) / (z - x)

    def settled(self, before: BigReal, after: BigReal) -> bool:
        scale = abs(after)
        if scale < 1:
            scale = self.ctx.make(1)
        return abs(after - before) <= self._noise * scale

    def vanishes(self, value: BigReal) -> bool:
        return value.is_zero()


def divided_difference(f: TestFunction, a: BigReal, b: BigReal, counter: EvalCounter) -> BigReal:
    """First divided difference f[a, b] (two counted evaluations).

    Raises:
        DegenerateNodes: a and b coincide to working precision.
    """
    return NumericEvaluator(f, counter, a.context).dd(a, b)


def second_divided_difference(f: TestFunction, z: BigReal, x: BigReal, counter: EvalCounter) -> BigReal:
    """f[z, x, x] = (f[z, x] - f'(x)) / (z - x)."""
    return NumericEvaluator(f, counter, z.context).dd2(z, x)


# -- weight functions ---------------------------------------------------------------

WEIGHT_ARGUMENTS = ("t1", "t2", "t3", "t4", "t5")


@dataclass(frozen=True)
class WeightFn:
    """A weight function of some of the ratios t1..t5.

    ``conditions`` maps a derivative multi-index (one entry per argument) to
    the value the derivative must take at the origin.
    """

    name: str
    args: tuple[str, ...]
    fn: Callable[..., Any]
    conditions: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)
    formula: str = ""

    def __post_init__(self) -> None:
        if not 1 <= len(self.args) <= 5 or any(a not in WEIGHT_ARGUMENTS for a in self.args):
            raise ValueError(f"weight {self.name}: arguments must be drawn from t1..t5")
        for index in self.conditions:
            if len(index) != len(self.args):
                raise ValueError(f"weight {self.name}: condition {index} does not match {self.args}")

    def __call__(self, ratios: Mapping[str, Any]) -> Any:
        return self.fn(*(ratios[a] for a in self.args))

    def at(self, *values: Any) -> Any:
        return self.fn(*values)


def _partial(weight: WeightFn, index: tuple[int, ...], ctx: PrecisionContext, h: BigReal) -> BigReal:
    zero = [ctx.zero()] * len(index)
    if sum(index) == 0:
        return weight.at(*zero)
    active = [i for i, k in enumerate(index) if k]
    if sum(index) == 1:
        (i,) = active
        plus, minus = list(zero), list(zero)
        plus[i], minus[i] = h, -h
        return (weight.at(*plus) - weight.at(*minus)) / (2 * h)
    if sum(index) == 2 and len(active) == 1:
        (i,) = active
        plus, minus = list(zero), list(zero)
        plus[i], minus[i] = h, -h
        return (weight.at(*plus) - 2 * weight.at(*zero) + weight.at(*minus)) / (h * h)
    if sum(index) == 2:
        i, j = active
        total = ctx.zero()
        for si, sj in product((1, -1), repeat=2):
            point = list(zero)
            point[i], point[j] = si * h, sj * h
            total = total + si * sj * weight.at(*point)
        return total / (4 * h * h)
    raise ValueError(f"weight {weight.name}: only derivatives up to order two can be checked")


def validate_weight(weight: WeightFn, bits: int = VALIDATION_BITS) -> None:
    """Check declared conditions by central finite differences at doubled precision.

    Raises:
        WeightConditionViolated: A condition fails by more than 10^(-digits/2).
    """
    target = PrecisionContext(bits)
    ctx = PrecisionContext(2 * bits)
    half = target.decimal_digits // 2
    h = ctx.power_of_ten(-half)
    for index, expected in weight.conditions.items():
        measured = _partial(weight, index, ctx, h)
        scale = max(abs(Fraction(expected)), Fraction(1))
        if sum(index) == 0:
            tolerance = ctx.power_of_ten(-target.decimal_digits + 2) * scale
        else:
            tolerance = ctx.power_of_ten(-half) * scale
        if abs(measured - Fraction(expected)) > tolerance:
            raise WeightConditionViolated(
                weight=weight.name, index=index, expected=expected, measured=format_scientific(measured, 12)
            )


# -- methods ------------------------------------------------------------------------


@dataclass(frozen=True)
class MethodScheme:
    """A fully parameterized iterative method."""

    name: str
    kind: Kind
    evals_per_iteration: int
    claimed_order: int
    stepper: Stepper
    params: Mapping[str, Fraction] = field(default_factory=dict)
    weights: Mapping[str, WeightFn] = field(default_factory=dict)
    family: str | None = None
    description: str = ""
    # published parameter names mapped onto ``params`` keys
    aliases: Mapping[str, str] = field(default_factory=dict)

    def step(self, ev: Evaluator, x: Any) -> Any:
        return self.stepper(ev, x, self.params, self.weights)

    def with_params(self, **overrides: Any) -> "MethodScheme":
        """Copy with some parameters replaced (values are converted to Fraction).

        Raises:
            UnknownParameter: The method has no parameter of that name.
        """
        params = dict(self.params)
        for name, value in overrides.items():
            name = self.aliases.get(name, name)
            if name not in params:
                raise UnknownParameter(method=self.name, name=name)
            params[name] = Fraction(value)
        return replace(self, params=params)

    @property
    def kappa(self) -> Fraction | None:
        return self.params.get("kappa")


# -- run loop -----------------------------------------------------------------------


@dataclass
class IterationTrace:
    method: str
    function_id: str
    iterates: list[BigReal] = field(default_factory=list)
    residuals: list[BigReal] = field(default_factory=list)
    tnfe_used: int = 0
    budget: int = 0
    steps: int = 0
    status: Status = Status.BUDGET_EXHAUSTED
    message: str = ""

    @property
    def last(self) -> BigReal | None:
        return self.iterates[-1] if self.iterates else None


def is_diverging(iterates: list[BigReal], residuals: list[BigReal]) -> bool:
    """Divergence predicate evaluated at the last recorded iterate."""
    x = iterates[-1]
    if abs(x) > DIVERGENCE_MAGNITUDE:
        return True
    x0 = iterates[0]
    if abs(x - x0) > RUNAWAY_FACTOR * max(abs(x0), x0.context.make(1)):
        return True
    if len(residuals) > DIVERGENCE_RUN:
        recent = [abs(r) for r in residuals[-(DIVERGENCE_RUN + 1):]]
        return all(later > DIVERGENCE_GROWTH * earlier for earlier, later in zip(recent, recent[1:]))
    return False


def iterate(method: MethodScheme, f: TestFunction, x0: BigReal, tnfe_budget: int) -> IterationTrace:
    """Run ``method`` from ``x0`` until the evaluation budget is spent.

    Every completed iteration is charged ``evals_per_iteration``, including
    one that ended early on a landed sub-step. The residual that ends the run
    is not charged; a step that breaks down is charged what it evaluated.
    Every failure is encoded in the returned trace's status; nothing is raised.
    """
    if tnfe_budget < method.evals_per_iteration:
        raise ValueError(
            f"budget {tnfe_budget} is below one iteration of {method.name} ({method.evals_per_iteration})"
        )
    ctx = x0.context
    counter = EvalCounter()
    trace = IterationTrace(method=method.name, function_id=f.id, budget=tnfe_budget)
    iterations = tnfe_budget // method.evals_per_iteration
    x = x0
    partial = 0

    for n in range(iterations + 1):
        ev = NumericEvaluator(f, counter, ctx)
        spent = counter.total
        trace.iterates.append(x)
        try:
            fx = ev.f(x) if n < iterations else f.value(x)
        except DomainError as exc:
            trace.iterates.pop()
            trace.status, trace.message = Status.DOMAIN_ERROR, str(exc)
            break
        trace.residuals.append(fx)
        logger.debug("%s/%s n=%d |f(x)|=%s", method.name, f.id, n, format_scientific(abs(fx), 4))
        if fx.is_zero():
            trace.status = Status.CONVERGED
            break
        if is_diverging(trace.iterates, trace.residuals):
            trace.status = Status.DIVERGENT
            break
        if n == iterations:
            break
        try:
            x = ctx.convert(method.step(ev, x))
        except FunctionDomainError as exc:
            partial = counter.total - spent
            trace.status, trace.message = Status.DOMAIN_ERROR, str(exc)
            break
        except (DegenerateNodes, SingularStep, DomainError) as exc:
            partial = counter.total - spent
            if ev.ran_off():
                trace.status, trace.message = Status.DIVERGENT, f"step left the basin: {exc}"
            else:
                trace.status, trace.message = Status.DEGENERATE_STEP, str(exc)
            break
        trace.steps += 1
        if counter.total - spent > method.evals_per_iteration:
            logger.warning(
                "%s on %s evaluated %d times in one iteration (expected %d)",
                method.name,
                f.id,
                counter.total - spent,
                method.evals_per_iteration,
            )
        if x == trace.iterates[-1]:
            # fixed point at working precision
            trace.status = Status.CONVERGED
            break

    trace.tnfe_used = trace.steps * method.evals_per_iteration + min(partial, method.evals_per_iteration)
    if trace.status in (Status.DEGENERATE_STEP, Status.DOMAIN_ERROR):
        logger.warning("%s on %s stopped: %s (%s)", method.name, f.id, trace.status.value, trace.message)
    return trace
