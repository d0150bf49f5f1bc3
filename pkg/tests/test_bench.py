import io
import json
from dataclasses import replace
from fractions import Fraction

import pandas as pd
import pytest

from rootlab.bench.report import RECORD_COLUMNS, render, render_csv, render_records, render_text, to_frame
from rootlab.bench.runner import (
    SEEDS,
    BenchConfig,
    CellJob,
    CellResult,
    TableRun,
    cell_within,
    run_cell,
    run_cells,
    run_table,
    table_jobs,
)
from rootlab.bench.tables import (
    TABLE_IDS,
    TABLES,
    PrintedCell,
    coc_within,
    error_within,
    printed_exponent,
    status_within,
)
from rootlab.config import Settings


def _make_result(method, function_id, exponent=-100, coc=7.0):
    return CellResult(
        method=method,
        function_id=function_id,
        x0=SEEDS[function_id],
        outcome="converged",
        status="BudgetExhausted",
        tnfe_used=12,
        iterations=3,
        error=f"1.00e{exponent}",
        error_exponent=exponent,
        below_precision=False,
        coc=coc,
        coc_cell=f"{coc:.4f}",
    )


def _make_run(table_id):
    table = TABLES[table_id]
    config = BenchConfig.for_table(table, Settings(bits=256))
    results = [_make_result(job.method, job.function_id) for job in table_jobs(table, config)]
    within = {(r.method, r.function_id): True for r in results}
    return TableRun(table, config, results, within)


def test_printed_exponent():
    assert printed_exponent("2.71e-142") == -142
    assert printed_exponent("4.e-172") == -172
    assert printed_exponent("10.1") == 1
    assert printed_exponent("0.01") == -2
    assert printed_exponent("2.") == 0
    assert printed_exponent("6.79e6") == 6
    assert printed_exponent("dgt") is None
    with pytest.raises(ValueError):
        printed_exponent("n/a")


def test_table_shapes():
    widths = {2: 7, 3: 7, 4: 3, 5: 9, 6: 9, 7: 5}
    assert TABLE_IDS == (2, 3, 4, 5, 6, 7)
    for table_id, table in TABLES.items():
        assert table.functions == tuple(f"f{i}" for i in range(1, 13))
        assert len(table.methods) == widths[table_id]
        assert len(table.cells) == 12 * widths[table_id]


def test_reference_cells():
    assert TABLES[2].cell("FD1-M1", "f1").error_exponent == -142
    assert TABLES[2].cell("FD1-M1", "f2").error == "3.90e-190"
    assert TABLES[4].cell("FD1-M2", "f9") == PrintedCell(error="5.10e-662", coc="7.0000")
    assert TABLES[5].cell("FD6", "f11").error == "4.e-169"
    assert TABLES[6].cell("TS1", "f2").coc_value == pytest.approx(-1.15)

    fd7 = TABLES[7].cell("FD7", "f10")
    assert (fd7.error, fd7.kappa, fd7.coc) == ("3.81e-262", Fraction(-1), "7")
    assert TABLES[7].cell("FD7", "f1").kappa == 1

    failed = TABLES[7].cell("FS4-2", "f3")
    assert failed.diverged
    assert failed.coc_value is None


def test_error_within():
    printed = PrintedCell(error="2.71e-142")
    assert error_within(printed, "converged", -140, False, 0.10)
    assert not error_within(printed, "converged", -100, False, 0.10)
    assert error_within(printed, "converged", None, True, 0.10)
    assert not error_within(printed, "failed", None, False, 0.10)

    diverged = PrintedCell(error="dgt")
    assert error_within(diverged, "dgt", None, False, 0.10)
    assert not error_within(diverged, "converged", -300, False, 0.10)

    stalled = PrintedCell(error="10.1")
    assert error_within(stalled, "converged", 1, False, 0.10)
    assert error_within(stalled, "failed", None, False, 0.10)
    assert not error_within(stalled, "converged", -50, False, 0.10)


def test_coc_within():
    near = PrintedCell(coc="6.0000")
    assert coc_within(near, 6, 5.98, 0.05)
    assert not coc_within(near, 6, 5.5, 0.05)
    assert not coc_within(near, 6, None, 0.05)

    undefined = PrintedCell(coc="X")
    assert coc_within(undefined, 7, None, 0.05)
    assert not coc_within(undefined, 7, 7.0, 0.05)

    anomalous_low = PrintedCell(coc="3.4125")
    assert coc_within(anomalous_low, 6, 3.9, 0.05)
    assert not coc_within(anomalous_low, 6, 6.0, 0.05)

    anomalous_high = PrintedCell(coc="10")
    assert coc_within(anomalous_high, 7, 7.0, 0.05)
    assert not coc_within(anomalous_high, 7, 6.5, 0.05)

    slightly_high = PrintedCell(coc="6.0971")
    assert coc_within(slightly_high, 6, 6.12, 0.05)


def test_status_within():
    assert status_within(PrintedCell(error="5.12e-82"), "converged", -40, False)
    assert status_within(PrintedCell(error="5.12e-82"), "converged", None, True)
    assert not status_within(PrintedCell(error="5.12e-82"), "dgt", None, False)
    assert status_within(PrintedCell(error="10.1"), "converged", 0, False)
    assert not status_within(PrintedCell(error="10.1"), "converged", -60, False)


def test_cell_within_compares_status_only_methods_loosely():
    config = BenchConfig.for_table(TABLES[2], Settings())
    measured = _make_result("CH", "f1", exponent=-40, coc=5.99)
    assert cell_within(TABLES[2], measured, config)
    assert not cell_within(TABLES[2], _make_result("SG", "f1", exponent=-40), config)

    # CH/f10 prints an anomalous COC; it is not matched
    assert cell_within(TABLES[3], _make_result("CH", "f10", coc=6.0), config)
    assert not cell_within(TABLES[3], _make_result("CH", "f1", coc=5.5), config)


def test_table_jobs():
    jobs = table_jobs(TABLES[7], BenchConfig.for_table(TABLES[7], Settings(bits=512, tnfe=12)))
    assert len(jobs) == 60
    assert jobs[0] == CellJob("FD7", "f1", 512, 12, Fraction(1))
    assert jobs[1].method == "FS3-1"
    assert jobs[1].kappa is None
    assert next(j for j in jobs if (j.method, j.function_id) == ("FD7", "f10")).kappa == -1


def test_bench_config_selects_a_sub_grid():
    table = TABLES[5]
    config = BenchConfig.for_table(table, Settings(), methods=["fd6", "FD4"], functions=["F11", "f2"])
    assert config.methods == ("FD4", "FD6")
    assert config.functions == ("f2", "f11")
    assert [(j.method, j.function_id) for j in table_jobs(table, config)] == [
        ("FD4", "f2"),
        ("FD6", "f2"),
        ("FD4", "f11"),
        ("FD6", "f11"),
    ]
    with pytest.raises(ValueError):
        BenchConfig.for_table(table, Settings(), methods=["FD1-M1"])
    with pytest.raises(ValueError):
        BenchConfig.for_table(table, Settings(), functions=["f13"])


def test_render_text_of_a_sub_grid():
    table = TABLES[4]
    config = BenchConfig.for_table(table, Settings(), methods=["AL1"], functions=["f9"])
    result = _make_result("AL1", "f9")
    text = render_text(TableRun(table, config, [result], {("AL1", "f9"): True}))
    assert "FD1-M2" not in text
    assert "f9, 4.4" in text
    assert text.splitlines()[-1] == "within tolerance of the printed values: 1/1"


def test_run_cell():
    result = run_cell(CellJob("FD1-M1", "f1", 512, 12))
    assert result.x0 == "0.25"
    assert result.status == "BudgetExhausted"
    assert result.tnfe_used == 12
    assert result.iterations == 3
    assert abs(result.error_exponent - (-142)) <= 14
    assert abs(result.coc - 6) < 0.1


def test_run_cells_keeps_job_order():
    jobs = [CellJob("NM", "f4", 256, 12), CellJob("FD5", "f1", 256, 12), CellJob("SM", "f9", 256, 12)]
    inline = run_cells(jobs)
    pooled = run_cells(jobs, workers=2)
    assert [(r.method, r.function_id) for r in pooled] == [("NM", "f4"), ("FD5", "f1"), ("SM", "f9")]
    assert pooled == inline


def test_records_do_not_depend_on_worker_count():
    config = BenchConfig.for_table(TABLES[4], Settings(bits=256), methods=["FD1-M2", "AL1"], functions=["f1", "f9"])
    inline = render_records(run_table(4, config))
    pooled = render_records(run_table(4, replace(config, workers=2)))
    assert inline == pooled
    for line in inline.splitlines():
        record = json.loads(line)
        assert record["error"] and record["coc"]


def test_to_frame():
    frame = to_frame(_make_run(4))
    assert list(frame.columns) == RECORD_COLUMNS
    assert len(frame) == 36
    assert str(frame["error_exponent"].dtype) == "Int64"
    assert frame.loc[0, "printed_error"] == "3.60e-182"


def test_render_text():
    text = render_text(_make_run(4))
    lines = text.splitlines()
    assert lines[0].startswith("Table 4.")
    assert "FD1-M2" in lines[1] and "AL1" in lines[1]
    assert any(line.startswith("f4, -0.5") for line in lines)
    assert "1.00e-100 (7.0000)" in text
    assert lines[-1] == "within tolerance of the printed values: 36/36"


def test_render_csv_and_records():
    run = _make_run(2)
    frame = pd.read_csv(io.StringIO(render_csv(run)))
    assert list(frame.columns) == RECORD_COLUMNS
    assert len(frame) == 84

    stream = render_records(run)
    assert stream.endswith("}\n")
    records = stream.splitlines()
    assert len(records) == 84
    assert all(json.loads(line)["table"] == 2 for line in records)
    first = json.loads(records[0])
    assert (first["function"], first["method"], first["error_exponent"]) == ("f1", "FD1-M1", -100)
    assert render(run, "records") == render_records(run)


@pytest.mark.slow
@pytest.mark.parametrize("table_id", TABLE_IDS)
def test_tables_reproduce(table_id):
    run = run_table(table_id, BenchConfig.for_table(TABLES[table_id], Settings(bits=4096, workers=4)))
    misses = [key for key, ok in run.within.items() if not ok]
    assert not misses, misses


@pytest.mark.slow
def test_seventh_order_reference_cell():
    result = run_cell(CellJob("FD1-M2", "f9", 4096, 12))
    assert abs(result.error_exponent - (-662)) <= 66
    assert abs(result.coc - 7) < 0.05
