"""Tests for the report emitters and the command line"""

import io
from pathlib import Path

import pandas as pd
import pytest

from cli_report import (
    EXIT_DATA,
    EXIT_OK,
    EXIT_USAGE,
    SUITE_ORDER,
    emit_report,
    parse_params,
    parse_report,
    rows_from_results,
    run_cli,
    suite_rows,
)
from classifier import classify_entry

GOLDEN = Path(__file__).resolve().parent.parent / "reports" / "golden"


def test_parse_params():
    assert parse_params("a=1, b=3") == {"a": 1, "b": 3}
    assert parse_params("") == {}


def test_classify_single_edge_as_json(capsys):
    code = run_cli(["classify", "--triad", "SU(3),SO(3)", "--edge", "a1,delta",
                    "--action", "hermann", "--format", "json"])
    assert code == EXIT_OK
    (row,) = parse_report(capsys.readouterr().out)
    assert row.category == "ii"
    assert sorted(r["psi_over_pi"] for r in row.proper_roots) == [0.25, 0.75]
    assert row.expected == "ii"


def test_classify_markdown_lists_closed_forms(capsys):
    assert run_cli(["classify", "--triad", "Sp(2),U(2)", "--edge", "1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "## Proper biharmonic orbits" in out
    assert "u = (4-sqrt(13))/3" in out


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["classify"], ["classify", "--triad", "SU(3),SO(3)", "--params", "q=x"]])
def test_usage_errors(argv):
    assert run_cli(argv) == EXIT_USAGE


def test_unknown_triad_is_a_data_error(capsys):
    assert run_cli(["classify", "--triad", "SU(7),SO(7)"]) == EXIT_DATA
    assert "CatalogError" in capsys.readouterr().err


def test_missing_catalog_file(tmp_path, capsys):
    assert run_cli(["--catalog", str(tmp_path / "none.json"), "catalog", "list"]) == EXIT_DATA
    assert "error:" in capsys.readouterr().err


def test_catalog_subcommands(capsys):
    assert run_cli(["catalog", "validate"]) == EXIT_OK
    assert run_cli(["catalog", "list", "--rank", "1"]) == EXIT_OK
    listing = capsys.readouterr().out
    assert "SO(1+q),SO(q)" in listing
    assert "SU(3),SO(3)" not in listing

    assert run_cli(["catalog", "show", "Sp(2),U(2)"]) == EXIT_OK
    shown = capsys.readouterr().out
    assert "edge 1" in shown
    assert "vertex" in shown


def test_csv_and_json_reports(catalog):
    rows = rows_from_results(classify_entry(catalog.get("Sp(4),Sp(2)xSp(2)"), "hermann"), catalog)
    frame = pd.read_csv(io.StringIO(emit_report(rows, "csv")))
    assert "category" in frame.columns
    assert len(frame) == 3
    again = parse_report(emit_report(rows, "json"))
    assert [r.to_dict() for r in again] == [r.to_dict() for r in rows]


def test_unknown_format(catalog):
    with pytest.raises(ValueError, match="unknown format"):
        emit_report([], "xlsx")


def test_deviating_rows_are_flagged(catalog):
    rows = rows_from_results(
        classify_entry(catalog.get("SO(2+a+b),SO(2+a)xSO(b),SO(2)xSO(a+b)"), "hermann"), catalog
    )
    assert rows[2].category_cell() == "(i) [table: (ii)]"


@pytest.mark.parametrize("suite", [
    pytest.param("isotropy2", marks=pytest.mark.slow),
    pytest.param("hermann2", marks=pytest.mark.slow),
    "rank1-group",
])
def test_suite_matches_golden_table(catalog, suite):
    assert suite in SUITE_ORDER
    expected = (GOLDEN / f"{suite}.md").read_text(encoding="utf-8")
    assert emit_report(suite_rows(suite, catalog, max_workers=1), "md", suite) == expected


def test_report_writes_output_file(tmp_path):
    target = tmp_path / "out" / "rank1.csv"
    code = run_cli(["report", "--suite", "rank1-group", "--format", "csv", "--output", str(target)])
    assert code == EXIT_OK
    assert len(pd.read_csv(target)) == 17


def test_threshold_command(capsys):
    code = run_cli(["threshold", "--triad", "SU(1+q),SO(1+q),S(U(1)xU(q))", "--param", "q", "--lo", "2", "--hi", "60"])
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "53 ≤ q ≤ 60: (ii)" in out
    assert "q**2 - 54*q + 89" in out


def test_bounds_command(capsys):
    assert run_cli(["bounds", "--triad", "SO(6),U(3),SO(3)xSO(3)"]) == EXIT_OK
    assert "26-8*sqrt(10)" in capsys.readouterr().out


@pytest.mark.slow
def test_verify_rank_one(capsys):
    assert run_cli(["verify", "--suite", "rank1-group", "--grid-n", "2000", "--workers", "1"]) == EXIT_OK
    assert "0 mismatch" in capsys.readouterr().out
