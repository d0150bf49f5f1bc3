"""Run benchmark cells (one method on one function), in parallel when asked."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from rootlab.bench.tables import (
    ANOMALY_MARGIN,
    STATUS_ONLY_METHODS,
    TABLES,
    BenchTable,
    coc_within,
    error_within,
    status_within,
)
from rootlab.bigreal import BigReal, PrecisionContext
from rootlab.config import Settings
from rootlab.diagnostics import RunReport, classify
from rootlab.funcsuite import SUITE, TestFunction, builtin_function
from rootlab.schemes import IterationTrace, MethodScheme, builtin_method, iterate

logger = logging.getLogger(__name__)

SEEDS = {entry.id: entry.x0 for entry in SUITE}


@dataclass(frozen=True)
class CellJob:
    """Everything a worker needs, as plain values."""

    method: str
    function_id: str
    bits: int
    tnfe: int
    kappa: Fraction | None = None


@dataclass(frozen=True)
class CellResult:
    method: str
    function_id: str
    x0: str
    outcome: str
    status: str
    tnfe_used: int
    iterations: int
    error: str
    error_exponent: int | None
    below_precision: bool
    coc: float | None
    coc_cell: str
    kappa: Fraction | None = None
    message: str = ""


def solve(
    method: MethodScheme,
    f: TestFunction,
    x0: BigReal,
    tnfe: int,
    alpha: BigReal | None = None,
    label: str | None = None,
) -> tuple[IterationTrace, RunReport]:
    """Iterate ``method`` on ``f`` and classify the run against ``alpha`` (default: f's root)."""
    trace = iterate(method, f, x0, tnfe)
    root = alpha if alpha is not None else f.reference_root
    if root is None:
        raise ValueError(f"{f.id}: no reference root to measure errors against")
    return trace, classify(trace, root, x0=label)


def run_cell(job: CellJob) -> CellResult:
    ctx = PrecisionContext(job.bits)
    f = builtin_function(job.function_id, ctx)
    method = builtin_method(job.method)
    if job.kappa is not None:
        method = method.with_params(kappa=job.kappa)
    _, report = solve(method, f, f.default_x0, job.tnfe, label=SEEDS[job.function_id])
    logger.info("%s/%s: %s %s", job.method, job.function_id, report.error_cell, report.coc_cell)
    return CellResult(
        method=method.name,
        function_id=f.id,
        x0=report.x0,
        outcome=report.outcome,
        status=report.status.value,
        tnfe_used=report.tnfe_used,
        iterations=report.iterations,
        error=report.error_cell,
        error_exponent=report.error_exponent,
        below_precision=report.below_precision,
        coc=None if report.coc is None else float(report.coc),
        coc_cell=report.coc_cell,
        kappa=job.kappa,
        message=report.message,
    )


def run_cells(jobs: Iterable[CellJob], workers: int = 1) -> list[CellResult]:
    """Results in job order whatever the worker count."""
    jobs = list(jobs)
    if workers <= 1:
        return [run_cell(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_cell, jobs))


@dataclass(frozen=True)
class BenchConfig:
    """One table run: precision, budget, the cells to run and the tolerances."""

    bits: int
    tnfe: int
    methods: tuple[str, ...]
    functions: tuple[str, ...]
    output_format: str = "text"
    exponent_slack: float = 0.10
    coc_slack: float = 0.05
    workers: int = 1

    @classmethod
    def for_table(
        cls,
        table: BenchTable,
        settings: Settings,
        methods: Sequence[str] = (),
        functions: Sequence[str] = (),
    ) -> "BenchConfig":
        """Every printed cell by default; ``methods``/``functions`` select a sub-grid.

        Raises:
            ValueError: If a selected method or function is not part of the table.
        """
        return cls(
            bits=settings.bits,
            tnfe=settings.tnfe,
            methods=_select(table.methods, methods, table.id, "method"),
            functions=_select(table.functions, functions, table.id, "function"),
            output_format=settings.output_format,
            exponent_slack=settings.exponent_slack,
            coc_slack=settings.coc_slack,
            workers=settings.workers,
        )


def _select(available: tuple[str, ...], wanted: Sequence[str], table_id: int, what: str) -> tuple[str, ...]:
    if not wanted:
        return available
    by_key = {name.upper(): name for name in available}
    missing = [name for name in wanted if name.upper() not in by_key]
    if missing:
        raise ValueError(f"table {table_id} has no {what} column {', '.join(missing)}")
    chosen = {by_key[name.upper()] for name in wanted}
    return tuple(name for name in available if name in chosen)


def table_jobs(table: BenchTable, config: BenchConfig) -> list[CellJob]:
    """Row-major jobs; a printed kappa annotation overrides the method default."""
    jobs = []
    for function_id in config.functions:
        for method in config.methods:
            printed = table.cell(method, function_id)
            jobs.append(CellJob(method, function_id, config.bits, config.tnfe, printed.kappa))
    return jobs


@dataclass(frozen=True)
class TableRun:
    table: BenchTable
    config: BenchConfig
    results: list[CellResult]
    within: Mapping[tuple[str, str], bool]


def cell_within(table: BenchTable, result: CellResult, config: BenchConfig) -> bool:
    """Whether one measured cell matches its printed counterpart."""
    printed = table.cell(result.method, result.function_id)
    order = builtin_method(result.method).claimed_order
    ok = True
    if result.method in STATUS_ONLY_METHODS:
        if "error" in table.shows:
            ok = status_within(printed, result.outcome, result.error_exponent, result.below_precision)
        near_order = printed.coc_value is not None and abs(printed.coc_value - order) <= float(ANOMALY_MARGIN)
        if "coc" in table.shows and near_order:
            ok &= coc_within(printed, order, result.coc, config.coc_slack)
        return ok
    if "error" in table.shows:
        ok &= error_within(printed, result.outcome, result.error_exponent, result.below_precision, config.exponent_slack)
    if "coc" in table.shows:
        ok &= coc_within(printed, order, result.coc, config.coc_slack)
    return ok


def run_table(table_id: int, config: BenchConfig) -> TableRun:
    table = TABLES[table_id]
    results = run_cells(table_jobs(table, config), config.workers)
    within = {}
    for result in results:
        ok = cell_within(table, result, config)
        if not ok:
            printed = table.cell(result.method, result.function_id)
            logger.warning(
                "table %d %s/%s: measured %s (coc %s), printed %s (coc %s)",
                table_id,
                result.method,
                result.function_id,
                result.error,
                result.coc_cell,
                printed.error,
                printed.coc,
            )
        within[(result.method, result.function_id)] = ok
    logger.info("table %d: %d/%d cells within tolerance", table_id, sum(within.values()), len(within))
    return TableRun(table, config, results, within)
