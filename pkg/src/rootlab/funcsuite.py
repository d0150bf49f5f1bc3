"""Test functions, evaluation counting and the twelve-function benchmark suite."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

from rootlab.bigreal import BigReal, PrecisionContext, format_scientific
from rootlab.config import DEFAULT_BITS
from rootlab.errors import MultipleRootSuspected, NoConvergence
from rootlab.expr import Expr, differentiate, parse_expression, to_source

logger = logging.getLogger(__name__)

MAX_REFINE_ITERATIONS = 200


@dataclass
class EvalCounter:
    """Evaluations charged against a run's TNFE budget (one counter per run)."""

    f_evals: int = 0
    df_evals: int = 0

    @property
    def total(self) -> int:
        return self.f_evals + self.df_evals


@dataclass(frozen=True)
class TestFunction:
    """A scalar test function with its cached symbolic derivative and root oracle."""

    __test__ = False  # not a pytest test class

    id: str
    body: Expr
    derivative: Expr = field(init=False, compare=False)
    reference_root: BigReal | None = None
    default_x0: BigReal | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "derivative", differentiate(self.body))

    @classmethod
    def from_source(cls, id: str, source: str, **kwargs) -> "TestFunction":
        return cls(id=id, body=parse_expression(source), **kwargs)

    @property
    def source(self) -> str:
        return to_source(self.body)

    def value(self, x: BigReal) -> BigReal:
        """Uncounted evaluation (oracles and diagnostics only)."""
        return self.body.evaluate(x)

    def slope(self, x: BigReal) -> BigReal:
        return self.derivative.evaluate(x)

    def with_root(self, root: BigReal, x0: BigReal | None = None) -> "TestFunction":
        return TestFunction(id=self.id, body=self.body, reference_root=root, default_x0=self.default_x0 if x0 is None else x0)


def evaluate(f: TestFunction, x: BigReal, counter: EvalCounter) -> BigReal:
    """Evaluate f at x, charging one function evaluation.

    Raises:
        DomainError: x outside the domain of f.
    """
    counter.f_evals += 1
    return f.value(x)


def evaluate_derivative(f: TestFunction, x: BigReal, counter: EvalCounter) -> BigReal:
    """Evaluate f' at x via the cached symbolic derivative; counts toward TNFE."""
    counter.df_evals += 1
    return f.slope(x)


def _precision_ladder(final_bits: int) -> list[int]:
    ladder = []
    bits = 64
    while bits < final_bits:
        ladder.append(bits)
        bits *= 2
    ladder.append(final_bits)
    return ladder


def refine_root(f: TestFunction, seed: BigReal, target_digits: int | None = None) -> BigReal:
    """Newton iteration with precision doubling up to the seed's context.

    Args:
        f: Function with a simple root near ``seed``.
        seed: Starting point; its context fixes the final precision.
        target_digits: Required accuracy in digits (default: context digits - 10).

    Returns:
        The root at the seed's precision.

    Raises:
        NoConvergence: Residual fails to contract within 200 iterations.
        MultipleRootSuspected: |f'(root)| < 10^(-target_digits/2).
    """
    final = seed.context
    target = final.decimal_digits - 10 if target_digits is None else target_digits
    if target > final.decimal_digits:
        raise ValueError(f"target of {target} digits exceeds the {final.decimal_digits}-digit context")

    x = seed
    iterations = 0
    for bits in _precision_ladder(final.bits):
        ctx = PrecisionContext(bits)
        x = ctx.convert(x)
        previous_step: BigReal | None = None
        while True:
            iterations += 1
            if iterations > MAX_REFINE_ITERATIONS:
                raise NoConvergence(f"{f.id}: no convergence from {format_scientific(seed, 10)}")
            fx = f.value(x)
            if fx.is_zero():
                break
            slope = f.slope(x)
            if slope.is_zero():
                raise MultipleRootSuspected(f"{f.id}: f' vanishes at {format_scientific(x, 10)}")
            step = fx / slope
            x = x - step
            size = abs(step)
            if size <= ctx.ulp_scale(x) * 256:
                break
            # rounding noise: steps stopped shrinking once already tiny
            if previous_step is not None and size >= previous_step and size <= ctx.ulp_scale(x) * 2 ** (bits // 2):
                break
            previous_step = size
        logger.debug("%s: refined at %d bits after %d iterations", f.id, bits, iterations)

    residual = abs(f.value(x))
    if not residual.is_zero() and residual >= final.power_of_ten(-target + 10):
        raise NoConvergence(f"{f.id}: residual {format_scientific(residual, 3)} above tolerance")
    if abs(f.slope(x)) < final.power_of_ten(-(target // 2)):
        raise MultipleRootSuspected(f"{f.id}: |f'(alpha)| below 10^-{target // 2}")
    return x


@dataclass(frozen=True)
class SuiteEntry:
    id: str
    source: str
    x0: str
    root_hint: str  # printed prefix of the root; seeds the oracle
    exact_root: str | None = None


SUITE: tuple[SuiteEntry, ...] = (
    SuiteEntry("f1", "exp(x)*sin(x)+ln(1+x^2)", "0.25", "0", exact_root="0"),
    SuiteEntry("f2", "x^15+x^4+4*x^2-15", "1.1", "1.148538"),
    SuiteEntry("f3", "(x-2)*(x^10+x+1)*exp(-x-1)", "2.1", "2", exact_root="2"),
    SuiteEntry("f4", "exp(-x^2+x+2)-cos(x+1)+x^3+1", "-0.5", "-1", exact_root="-1"),
    SuiteEntry("f5", "(x+1)*exp(sin(x))-x^2*exp(cos(x))-1", "0.25", "0", exact_root="0"),
    SuiteEntry("f6", "sin(x)^2-x^2+1", "1.2", "1.40449165"),
    SuiteEntry("f7", "10*exp(-x^2)-1", "1.0", "1.517427"),
    SuiteEntry("f8", "1/(x^2-1)-1", "1.6", "1.414214"),
    SuiteEntry("f9", "ln(x^2+x+2)-x+1", "4.4", "4.15259074"),
    SuiteEntry("f10", "cos(x)^2-x/5", "1.5", "1.08598268"),
    SuiteEntry("f11", "x^10-2*x^3-x+1", "0.25", "0.591448093"),
    SuiteEntry("f12", "exp(sin(x))-x+1", "2.0", "2.63066415"),
)

SUITE_IDS = tuple(entry.id for entry in SUITE)


@lru_cache(maxsize=None)
def _suite_function(function_id: str, bits: int) -> TestFunction:
    entry = next((e for e in SUITE if e.id == function_id), None)
    if entry is None:
        raise KeyError(f"unknown suite function {function_id!r}; expected one of {', '.join(SUITE_IDS)}")
    ctx = PrecisionContext(bits)
    f = TestFunction.from_source(entry.id, entry.source, default_x0=ctx.make(entry.x0))
    if entry.exact_root is not None:
        root = ctx.make(entry.exact_root)
    else:
        root = refine_root(f, ctx.make(entry.root_hint))
    logger.debug("%s: alpha = %s", entry.id, format_scientific(root, 30))
    return f.with_root(root)


def builtin_function(function_id: str, ctx: PrecisionContext | None = None) -> TestFunction:
    """One suite member with its root refined at ``ctx`` precision."""
    ctx = ctx or PrecisionContext(DEFAULT_BITS)
    return _suite_function(function_id, ctx.bits)


def builtin_suite(ctx: PrecisionContext | None = None) -> list[TestFunction]:
    """The twelve benchmark functions with roots and default seeds."""
    return [builtin_function(function_id, ctx) for function_id in SUITE_IDS]
