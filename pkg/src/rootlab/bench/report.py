"""Render benchmark runs as aligned text, CSV or one JSON record per line."""

from __future__ import annotations

import pandas as pd

from rootlab.bench.runner import TableRun

RECORD_COLUMNS = [
    "table",
    "function",
    "x0",
    "method",
    "kappa",
    "outcome",
    "status",
    "tnfe_used",
    "iterations",
    "error",
    "error_exponent",
    "coc",
    "printed_error",
    "printed_coc",
    "within_tolerance",
]


def to_frame(run: TableRun) -> pd.DataFrame:
    """One row per cell, in table order."""
    rows = []
    for result in run.results:
        printed = run.table.cell(result.method, result.function_id)
        rows.append(
            {
                "table": run.table.id,
                "function": result.function_id,
                "x0": result.x0,
                "method": result.method,
                "kappa": None if result.kappa is None else str(result.kappa),
                "outcome": result.outcome,
                "status": result.status,
                "tnfe_used": result.tnfe_used,
                "iterations": result.iterations,
                "error": result.error,
                "error_exponent": result.error_exponent,
                "coc": result.coc_cell,
                "printed_error": printed.error,
                "printed_coc": printed.coc,
                "within_tolerance": run.within[(result.method, result.function_id)],
            }
        )
    frame = pd.DataFrame(rows, columns=RECORD_COLUMNS)
    return frame.astype({"error_exponent": "Int64"})


def _cell_text(row: pd.Series, shows: tuple[str, ...]) -> str:
    if shows == ("coc",):
        return row["coc"]
    if shows == ("error",):
        return row["error"]
    return f"{row['error']} ({row['coc']})"


def render_text(run: TableRun) -> str:
    """The table in its printed layout: rows are functions with seeds, columns methods."""
    frame = to_frame(run)
    frame["row"] = frame["function"] + ", " + frame["x0"]
    frame["cell"] = frame.apply(_cell_text, axis=1, shows=run.table.shows)
    grid = frame.pivot(index="row", columns="method", values="cell")
    rows = list(dict.fromkeys(frame["row"]))
    grid = grid.reindex(index=rows, columns=list(run.config.methods))
    grid.index.name = None
    grid.columns.name = None
    within = int(frame["within_tolerance"].sum())
    return "\n".join(
        [
            f"Table {run.table.id}. {run.table.caption}",
            grid.to_string(),
            f"within tolerance of the printed values: {within}/{len(frame)}",
        ]
    )


def render_csv(run: TableRun) -> str:
    return to_frame(run).to_csv(index=False)


def render_records(run: TableRun) -> str:
    return to_frame(run).to_json(orient="records", lines=True)


RENDERERS = {"text": render_text, "csv": render_csv, "records": render_records}


def render(run: TableRun, output_format: str) -> str:
    return RENDERERS[output_format](run)
