import json

from click.testing import CliRunner

from rootlab.bench.runner import SEEDS, BenchConfig, CellResult, TableRun, table_jobs
from rootlab.bench.tables import TABLES
from rootlab.cli import EXIT_DIVERGENT, EXIT_ERROR, EXIT_USAGE, cli
from rootlab.config import Settings


def _invoke(*args):
    return CliRunner().invoke(cli, list(args))


def _make_run(table_id, config=None):
    table = TABLES[table_id]
    config = config or BenchConfig.for_table(table, Settings(bits=256))
    results = [
        CellResult(job.method, job.function_id, SEEDS[job.function_id], "converged", "BudgetExhausted",
                   12, 3, "1.00e-90", -90, False, 6.0, "6.0000", job.kappa)
        for job in table_jobs(table, config)
    ]
    return TableRun(table, config, results, {(r.method, r.function_id): True for r in results})


def test_solve_expression():
    result = _invoke("solve", "--method", "NM", "--expr", "x", "--x0", "0.5", "--bits", "128")
    assert result.exit_code == 0, result.output
    assert "x0 = " in result.output
    assert "status: Converged" in result.output


def test_solve_summary_block():
    result = _invoke("solve", "--method", "NM", "--expr", "x", "--x0", "0.5", "--bits", "128")
    lines = result.output.splitlines()
    keys = [line.split(":")[0] for line in lines if not line.startswith("x")]
    assert keys == ["method", "function", "status", "tnfe used", "error", "coc"]
    assert lines[-6:-3] == ["method: NM", "function: expr", "status: Converged"]
    assert "tnfe used: 2" in lines


def test_solve_suite_function():
    result = _invoke("solve", "--method", "FD1-M1", "--function", "f1", "--bits", "512")
    assert result.exit_code == 0, result.output
    assert "function: f1" in result.output
    assert "tnfe used: 12" in result.output
    assert "status: BudgetExhausted" in result.output


def test_solve_usage_errors():
    assert _invoke("solve", "--function", "f1").exit_code == EXIT_USAGE
    assert _invoke("solve", "--method", "XX9", "--function", "f1").exit_code == EXIT_USAGE
    both = _invoke("solve", "--method", "NM", "--function", "f1", "--expr", "x", "--x0", "1")
    assert both.exit_code == EXIT_USAGE
    assert _invoke("solve", "--method", "NM", "--expr", "x").exit_code == EXIT_USAGE
    assert _invoke("solve", "--method", "NM", "--function", "f1", "--param", "bogus").exit_code == EXIT_USAGE


def test_solve_divergent_run():
    result = _invoke(
        "solve", "--method", "NM", "--expr", "x/(1+x^2)", "--x0", "2", "--root", "0", "--tnfe", "20", "--bits", "128"
    )
    assert result.exit_code == EXIT_DIVERGENT
    assert "status: Divergent" in result.output


def test_solve_domain_error():
    result = _invoke("solve", "--method", "NM", "--expr", "ln(x)", "--x0", "3", "--root", "1", "--bits", "128")
    assert result.exit_code == EXIT_ERROR
    assert "status: DomainError" in result.output


def test_bad_config_file_is_a_usage_error(tmp_path):
    path = tmp_path / "rootlab.conf"
    path.write_text("bits=32\n")
    result = _invoke("--config", str(path), "solve", "--method", "NM", "--function", "f1")
    assert result.exit_code == EXIT_USAGE


def test_list_methods():
    result = _invoke("list", "methods")
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0].split() == ["method", "kind", "p", "d", "E", "optimal", "parameters"]
    fd7 = next(line for line in lines if line.startswith("FD7 "))
    assert "1.6266" in fd7
    assert "<1.6818" in fd7


def test_list_with_pattern():
    result = _invoke("list", "methods", "fd1")
    names = [line.split()[0] for line in result.output.splitlines()[1:]]
    assert names == ["FD1-M1", "FD1-M2"]

    functions = _invoke("list", "functions")
    assert len(functions.output.splitlines()) == 12
    assert functions.output.startswith("f1 ")


def test_verify_order():
    result = _invoke("verify-order", "--family", "FD2", "--conditions", "seventh")
    assert result.exit_code == 0, result.output
    assert "certified order: 7" in result.output


def test_verify_order_records():
    result = _invoke("verify-order", "--family", "FD2", "--conditions", "seventh", "--format", "records")
    assert result.exit_code == 0, result.output
    record = json.loads(result.output)
    assert (record["target"], record["conditions"], record["order"]) == ("FD2", "seventh", 7)
    assert record["certified"] is True


def test_verify_order_usage_errors():
    assert _invoke("verify-order", "--family", "FD9").exit_code == EXIT_USAGE
    assert _invoke("verify-order").exit_code == EXIT_USAGE


def test_verify_reductions():
    result = _invoke("verify-order", "--reductions")
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert len(lines) == 13
    assert all(": agrees through e^" in line for line in lines)


def test_bench_writes_report(tmp_path, monkeypatch):
    seen = {}

    def fake_run_table(table_id, config):
        seen["args"] = (table_id, config.bits, config.workers)
        return _make_run(table_id, config)

    monkeypatch.setattr("rootlab.cli.run_table", fake_run_table)
    out = tmp_path / "table2.csv"
    result = _invoke("bench", "--table", "2", "--format", "csv", "--bits", "512", "--workers", "2", "--out", str(out))
    assert result.exit_code == 0, result.output
    assert seen["args"] == (2, 512, 2)
    assert f"wrote 84 cells to {out}" in result.output
    assert out.read_text().startswith("table,function,x0,method")


def test_bench_text_to_stdout(monkeypatch):
    monkeypatch.setattr("rootlab.cli.run_table", lambda table_id, config: _make_run(table_id, config))
    result = _invoke("bench", "--table", "4")
    assert result.exit_code == 0
    assert result.output.startswith("Table 4.")
    assert "within tolerance of the printed values: 36/36" in result.output


def test_bench_unknown_table():
    assert _invoke("bench", "--table", "9").exit_code == EXIT_USAGE


def test_bench_selects_cells(monkeypatch):
    monkeypatch.setattr("rootlab.cli.run_table", lambda table_id, config: _make_run(table_id, config))
    result = _invoke("bench", "--table", "7", "--method", "fd7", "--function", "f10", "--format", "records")
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert len(lines) == 1
    assert '"kappa":"-1"' in lines[0]

    assert _invoke("bench", "--table", "7", "--method", "FD1-M1").exit_code == EXIT_USAGE
