"""Convergence diagnostics: COC, efficiency indices and run classification."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from rootlab.bigreal import BigReal, PrecisionContext, format_scientific
from rootlab.errors import DomainError, UndefinedCOC
from rootlab.schemes.core import IterationTrace, Status

logger = logging.getLogger(__name__)

REPORT_BITS = 128
# errors this many digits above the working floor are still resolvable
PRECISION_GUARD_DIGITS = 10


def coc_from_errors(e_prev: BigReal, e_mid: BigReal, e_last: BigReal) -> BigReal:
    """ln(e_last/e_mid) / ln(e_mid/e_prev) for three positive error magnitudes.

    Raises:
        UndefinedCOC: An error is zero or the ratio of logarithms is undefined.
    """
    if any(e.is_zero() for e in (e_prev, e_mid, e_last)):
        raise UndefinedCOC(reason="an iterate landed exactly on the root")
    try:
        denominator = (e_mid / e_prev).ln()
        if denominator.is_zero():
            raise UndefinedCOC(reason="consecutive errors are equal")
        return (e_last / e_mid).ln() / denominator
    except DomainError as exc:
        raise UndefinedCOC(reason=str(exc)) from exc


def coc(trace: IterationTrace, alpha: BigReal) -> BigReal:
    """Computational order of convergence from the last three iterates.

    Raises:
        UndefinedCOC: Fewer than three iterates, or an iterate equals ``alpha``.
    """
    if len(trace.iterates) < 3:
        raise UndefinedCOC(reason=f"only {len(trace.iterates)} iterates")
    ctx = trace.iterates[-1].context
    root = ctx.convert(alpha)
    errors = [abs(x - root) for x in trace.iterates[-3:]]
    return coc_from_errors(*errors)


def efficiency_index(p: int, d: int, ctx: PrecisionContext | None = None) -> BigReal:
    """p^(1/d): order per function evaluation."""
    if p < 1 or d < 1:
        raise ValueError("order and evaluation count must be positive")
    ctx = ctx or PrecisionContext(REPORT_BITS)
    return ctx.make(p) ** Fraction(1, d)


def optimal_efficiency(n: int, ctx: PrecisionContext | None = None) -> BigReal:
    """2^(n/(n+1)), the best index an n+1-evaluation memoryless method can reach."""
    if n < 1:
        raise ValueError("n must be positive")
    ctx = ctx or PrecisionContext(REPORT_BITS)
    return ctx.make(2) ** Fraction(n, n + 1)


def is_optimal(p: int, d: int) -> bool:
    return p == 2 ** (d - 1)


@dataclass(frozen=True)
class RunReport:
    method: str
    function_id: str
    x0: str
    status: Status
    tnfe_used: int
    iterations: int
    final_abs_error: BigReal | None = None
    error_exponent: int | None = None
    below_precision: bool = False
    precision_floor: int = 0
    coc: BigReal | None = None
    coc_reason: str = ""
    message: str = ""

    @property
    def outcome(self) -> str:
        if self.status is Status.DIVERGENT:
            return "dgt"
        if self.status in (Status.DEGENERATE_STEP, Status.DOMAIN_ERROR):
            return "failed"
        return "converged"

    @property
    def error_cell(self) -> str:
        """Absolute error as printed in the tables ("dgt" and "X" for failures)."""
        if self.status is Status.DIVERGENT:
            return "dgt"
        if self.final_abs_error is None:
            return "X"
        if self.below_precision:
            return f"<1e-{self.precision_floor}"
        return format_scientific(self.final_abs_error, 3)

    @property
    def coc_cell(self) -> str:
        if self.coc is None:
            return "X"
        return f"{float(self.coc):.4f}"


def classify(trace: IterationTrace, alpha: BigReal, x0: str | None = None) -> RunReport:
    """Assemble the report for a finished run. Never raises."""
    floor = 0
    error: BigReal | None = None
    exponent: int | None = None
    below = False
    if trace.iterates:
        last = trace.iterates[-1]
        floor = last.context.decimal_digits - PRECISION_GUARD_DIGITS
        error = abs(last - last.context.convert(alpha))
        if error.is_zero():
            below = True
        else:
            exponent = error.floor_log10()
            below = exponent < -floor

    value: BigReal | None = None
    reason = ""
    if trace.status in (Status.CONVERGED, Status.BUDGET_EXHAUSTED):
        try:
            value = coc(trace, alpha)
        except UndefinedCOC as exc:
            reason = exc.reason
            logger.debug("%s/%s: %s", trace.method, trace.function_id, exc)
    else:
        reason = f"status {trace.status.value}"

    if x0 is None:
        x0 = format_scientific(trace.iterates[0], 6) if trace.iterates else ""
    return RunReport(
        method=trace.method,
        function_id=trace.function_id,
        x0=x0,
        status=trace.status,
        tnfe_used=trace.tnfe_used,
        iterations=max(len(trace.iterates) - 1, 0),
        final_abs_error=error,
        error_exponent=exponent,
        below_precision=below,
        precision_floor=floor,
        coc=value,
        coc_reason=reason,
        message=trace.message,
    )
