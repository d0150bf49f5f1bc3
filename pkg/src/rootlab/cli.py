"""Command-line interface for rootlab."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any

import click

from rootlab.bench.report import render
from rootlab.bench.runner import BenchConfig, run_table
from rootlab.bench.tables import TABLE_IDS, TABLES
from rootlab.bigreal import PrecisionContext, format_scientific
from rootlab.config import OUTPUT_FORMATS, Settings, get_config, get_settings, settings_as_dict
from rootlab.diagnostics import classify, efficiency_index, is_optimal, optimal_efficiency
from rootlab.errors import ConfigError, ParseError, RootlabError, UnknownMethod, UnknownParameter
from rootlab.funcsuite import SUITE, TestFunction, builtin_function, refine_root
from rootlab.orderlab.reductions import check_all
from rootlab.orderlab.symbolic import FAMILIES
from rootlab.orderlab.verify import certificate_record, certify, proof_report
from rootlab.schemes import METHOD_NAMES, Status, builtin_method, iterate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DIVERGENT = 2
EXIT_ERROR = 3
EXIT_USAGE = 64
ITERATE_DIGITS = 30


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def _print_stats(stats: dict[str, Any]) -> None:
    for key, value in stats.items():
        click.echo(f"{key}: {value}")


class _Group(click.Group):
    """Reports every usage error with exit code 64."""

    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as exc:
            exc.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            exc.exit_code = EXIT_USAGE
            raise


def _settings(ctx: click.Context, **overrides: Any) -> Settings:
    try:
        settings = get_settings(ctx.obj.get("config"), overrides)
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    logger.debug("settings: %s", settings_as_dict(settings))
    return settings


@click.group(cls=_Group)
@click.option(
    "--log-level",
    default="WARNING",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
    show_default=True,
)
@click.option("--config", "config_file", type=click.Path(dir_okay=False), help="Flat key=value settings file.")
@click.pass_context
def cli(ctx: click.Context, log_level: str, config_file: str | None) -> None:
    """High-order root finders: solve, benchmark and certify orders."""
    _configure_logging(log_level)
    ctx.ensure_object(dict)
    ctx.obj["config"] = config_file
    logger.debug("environment: %s", get_config())


def _parse_params(pairs: tuple[str, ...]) -> dict[str, str]:
    params = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key.strip():
            raise click.BadParameter(f"expected KEY=VALUE, got {pair!r}", param_hint="--param")
        params[key.strip()] = value.strip()
    return params


def _resolve_function(
    function_id: str | None, source: str | None, ctx: PrecisionContext
) -> TestFunction:
    if (function_id is None) == (source is None):
        raise click.UsageError("give exactly one of --function and --expr")
    if function_id is not None:
        try:
            return builtin_function(function_id.lower(), ctx)
        except KeyError as exc:
            raise click.BadParameter(str(exc.args[0]), param_hint="--function") from exc
    try:
        return TestFunction.from_source("expr", source)
    except ParseError as exc:
        raise click.BadParameter(str(exc), param_hint="--expr") from exc


@cli.command("solve")
@click.option("--method", "method_name", required=True, help="Registered method, e.g. FD1-M2.")
@click.option("--function", "function_id", help="Suite function f1..f12.")
@click.option("--expr", "source", help="Function of x, e.g. 'exp(x)-2'.")
@click.option("--x0", help="Initial guess (default: the suite seed).")
@click.option("--tnfe", type=int, help="Evaluation budget.")
@click.option("--bits", type=int, help="Working precision in bits.")
@click.option("--kappa", help="Offset parameter of derivative-free methods.")
@click.option("--param", "params", multiple=True, help="Method parameter override KEY=VALUE.")
@click.option("--root", help="Known root to measure errors against.")
@click.pass_context
def solve_command(
    ctx: click.Context,
    method_name: str,
    function_id: str | None,
    source: str | None,
    x0: str | None,
    tnfe: int | None,
    bits: int | None,
    kappa: str | None,
    params: tuple[str, ...],
    root: str | None,
) -> None:
    """Run one method on one function and report the outcome."""
    settings = _settings(ctx, bits=bits, tnfe=tnfe)
    precision = PrecisionContext(settings.bits)
    overrides = _parse_params(params)
    if kappa is not None:
        overrides["kappa"] = kappa
    try:
        method = builtin_method(method_name, **overrides)
    except (UnknownMethod, UnknownParameter, ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(str(exc)) from exc

    f = _resolve_function(function_id, source, precision)
    try:
        start = precision.make(x0) if x0 is not None else f.default_x0
        alpha = precision.make(root) if root is not None else None
    except (ParseError, ValueError) as exc:
        raise click.UsageError(str(exc)) from exc
    if start is None:
        raise click.UsageError("--x0 is required with --expr")

    try:
        trace = iterate(method, f, start, settings.tnfe)
        if alpha is None:
            alpha = f.reference_root
        if alpha is None:
            alpha = refine_root(f, trace.last) if trace.iterates else start
        report = classify(trace, alpha)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    except RootlabError as exc:
        click.echo(f"Error: {exc}", err=True)
        ctx.exit(EXIT_ERROR)

    for n, x in enumerate(trace.iterates):
        click.echo(f"x{n} = {format_scientific(x, ITERATE_DIGITS)}")
    _print_stats(
        {
            "method": method.name,
            "function": f.id,
            "status": report.status.value,
            "tnfe used": report.tnfe_used,
            "error": report.error_cell,
            "coc": report.coc_cell,
        }
    )
    if report.message:
        click.echo(f"note: {report.message}")
    if report.status is Status.DIVERGENT:
        ctx.exit(EXIT_DIVERGENT)
    if report.status in (Status.DEGENERATE_STEP, Status.DOMAIN_ERROR):
        ctx.exit(EXIT_ERROR)


@cli.command("bench")
@click.option("--table", "table_id", required=True, type=click.Choice([str(t) for t in TABLE_IDS]))
@click.option("--format", "output_format", type=click.Choice(OUTPUT_FORMATS), help="Output format.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="Write the report here.")
@click.option("--bits", type=int, help="Working precision in bits.")
@click.option("--tnfe", type=int, help="Evaluation budget.")
@click.option("--workers", type=int, help="Worker processes.")
@click.option("--method", "methods", multiple=True, help="Only this column (repeatable).")
@click.option("--function", "functions", multiple=True, help="Only this row (repeatable).")
@click.pass_context
def bench_command(
    ctx: click.Context,
    table_id: str,
    output_format: str | None,
    out: Path | None,
    bits: int | None,
    tnfe: int | None,
    workers: int | None,
    methods: tuple[str, ...],
    functions: tuple[str, ...],
) -> None:
    """Reproduce one of the comparison tables."""
    settings = _settings(ctx, bits=bits, tnfe=tnfe, workers=workers, format=output_format)
    try:
        config = BenchConfig.for_table(TABLES[int(table_id)], settings, methods, functions)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    run = run_table(int(table_id), config)
    text = render(run, config.output_format)
    if out is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        out.write_text(text)
        click.echo(f"wrote {len(run.results)} cells to {out}")


@cli.command("verify-order")
@click.option("--family", "target", help="FD1..FD6 or a registered method name.")
@click.option("--conditions", default="base", show_default=True, help="Condition set: base, seventh or none.")
@click.option("--truncation", type=int, help="Series truncation order (default: claimed order + 1).")
@click.option("--reductions", is_flag=True, help="Check the special cases that reproduce published methods.")
@click.option(
    "--format", "output_format", type=click.Choice(["text", "records"]), default="text", show_default=True
)
@click.pass_context
def verify_order_command(
    ctx: click.Context,
    target: str | None,
    conditions: str,
    truncation: int | None,
    reductions: bool,
    output_format: str,
) -> None:
    """Certify a convergence order by exact error-series expansion."""
    if reductions:
        results = check_all()
        for result in results:
            click.echo(f"{result.name}: {'agrees' if result.agrees else 'DIFFERS'} through e^{result.through}")
        ctx.exit(EXIT_OK if all(r.agrees for r in results) else EXIT_FAILED)
    if target is None:
        raise click.UsageError("--family is required")
    settings = _settings(ctx, truncation=truncation)
    try:
        certificate = certify(target, conditions, settings.truncation)
    except UnknownMethod as exc:
        raise click.BadParameter(
            f"{exc}; families are {', '.join(FAMILIES)}", param_hint="--family"
        ) from exc
    except RootlabError as exc:
        click.echo(f"Error: {exc}", err=True)
        ctx.exit(EXIT_FAILED)
    if output_format == "records":
        click.echo(json.dumps(certificate_record(certificate)))
    else:
        click.echo(proof_report(certificate))
    ctx.exit(EXIT_OK if certificate.certified else EXIT_FAILED)


@cli.command("list")
@click.argument("what", type=click.Choice(["methods", "functions"]))
@click.argument("pattern", required=False, default="")
def list_command(what: str, pattern: str) -> None:
    """List registered methods or suite functions, optionally filtered by name."""
    pattern = pattern.upper()
    if what == "functions":
        for entry in SUITE:
            if pattern in entry.id.upper():
                click.echo(f"{entry.id:<4} x0 = {entry.x0:<5} alpha ~ {entry.root_hint:<12} {entry.source}")
        return
    click.echo(f"{'method':<8} {'kind':<16} {'p':>2} {'d':>2} {'E':>7} {'optimal':>9}  parameters")
    for name in METHOD_NAMES:
        if pattern not in name.upper():
            continue
        method = builtin_method(name)
        p, d = method.claimed_order, method.evals_per_iteration
        index = float(efficiency_index(p, d))
        bound = float(optimal_efficiency(d - 1))
        optimal = "yes" if is_optimal(p, d) else f"<{bound:.4f}"
        params = ", ".join(f"{key}={value}" for key, value in method.params.items())
        click.echo(f"{name:<8} {method.kind.value:<16} {p:>2} {d:>2} {index:>7.4f} {optimal:>9}  {params}")
