"""Command-line interface: ingestion, dispatch, output formats, exit codes."""

import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from ellipsym import NullLaw, sample_mvn
from ellipsym.cli import (
    format_text_block,
    ingest_csv,
    main,
    read_table,
)
from ellipsym.hypothesis import TestResult as HypothesisResult

DATA = Path(__file__).parent / "data"
GOLDEN_20 = str(DATA / "golden_20x2.csv")


def write_csv(path, rows, header=None):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if header is not None:
            writer.writerow(header)
        writer.writerows(rows)
    return str(path)


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------


def test_simulate_then_ingest_roundtrip(tmp_path):
    out = str(tmp_path / "sim.csv")
    assert main(["simulate", "--dist", "normal", "--n", "25", "--d", "3",
                 "--seed", "5", "--out", out]) == 0
    X = ingest_csv(out)
    np.testing.assert_array_equal(X, sample_mvn(np.zeros(3), np.eye(3), 25, seed=5))


def test_read_table_header_modes(tmp_path):
    p = write_csv(tmp_path / "t.csv", [["1", "2"], ["3", "4"]], header=["a", "b"])
    names, rows = read_table(p)
    assert names == ["a", "b"] and len(rows) == 2
    names, rows = read_table(p, has_header=False)
    assert names is None and rows[0] == ["a", "b"]


def test_column_selection_by_name_and_index(tmp_path):
    rows = [[str(i), str(2 * i), str(3 * i)] for i in range(1, 9)]
    p = write_csv(tmp_path / "t.csv", rows, header=["u", "v", "w"])
    by_name = ingest_csv(p, columns=["u", "w"])
    by_index = ingest_csv(p, columns=["1", "3"])
    np.testing.assert_array_equal(by_name, by_index)
    assert by_name.shape == (8, 2)
    assert by_name[2, 1] == 9.0


def test_ingest_error_messages(tmp_path):
    p = write_csv(tmp_path / "bad.csv",
                  [["1", "2"], ["3", "oops"], ["5", "6"], ["7", "8"]],
                  header=["a", "b"])
    with pytest.raises(Exception, match=r"non-numeric value 'oops' at row 2, column b"):
        ingest_csv(p)

    p = write_csv(tmp_path / "na.csv",
                  [["1", "2"], ["3", "NA"], ["5", "6"], ["7", "8"]],
                  header=["a", "b"])
    with pytest.raises(Exception, match=r"missing value at row 2, column b"):
        ingest_csv(p)

    p = write_csv(tmp_path / "ragged.csv",
                  [["1", "2"], ["3"], ["5", "6"], ["7", "8"]],
                  header=["a", "b"])
    with pytest.raises(Exception, match=r"row 2 has 1 fields, expected 2"):
        ingest_csv(p)

    with pytest.raises(Exception, match="unknown column"):
        ingest_csv(write_csv(tmp_path / "c.csv", [["1", "2"]] * 6, header=["a", "b"]),
                   columns=["zz"])


# ---------------------------------------------------------------------------
# text and json output
# ---------------------------------------------------------------------------


def test_format_text_block_exact():
    result = HypothesisResult(
        method="schott",
        statistic=2.141691235666787,
        p_value=0.7096969,
        null_law=NullLaw.chi2(4),
        params={},
    )
    assert format_text_block(result, "golden_20x2") == (
        "\tSchott test for elliptical symmetry\n"
        "\n"
        "data:  golden_20x2\n"
        "statistic = 2.1417, p-value = 0.7097\n"
        "alternative hypothesis: the distribution is not elliptically symmetric"
    )


def test_cmd_test_text_output(capsys):
    assert main(["test", "--method", "schott", "--input", GOLDEN_20]) == 0
    out = capsys.readouterr().out
    assert out.startswith("\tSchott test for elliptical symmetry\n")
    assert "data:  golden_20x2\n" in out
    assert out.endswith("not elliptically symmetric\n")


def test_cmd_test_json_output(capsys):
    assert main(["test", "--method", "so", "--input", GOLDEN_20, "--f", "logistic",
                 "--format", "json"]) == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["method"] == "so"
    assert blob["null_law"]["kind"] == "chi2"
    assert 0 < blob["p_value"] <= 1


def test_cmd_test_location_flag(capsys):
    assert main(["test", "--method", "pg", "--input", GOLDEN_20,
                 "--location", "0,0", "--format", "json"]) == 0
    blob = json.loads(capsys.readouterr().out)
    assert blob["statistic"] == pytest.approx(9.55552301611759)


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------


def test_unknown_method_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["test", "--method", "nope", "--input", GOLDEN_20])
    assert exc.value.code == 2


def test_usage_error_exits_2(tmp_path, capsys):
    # hp without --c is a usage problem
    assert main(["test", "--method", "hp", "--input", GOLDEN_20]) == 2
    assert "ellipsym: error:" in capsys.readouterr().err

    # powerExp with the exponent of 1 is the Gaussian edge the score
    # construction excludes
    assert main(["test", "--method", "so", "--input", GOLDEN_20,
                 "--f", "powerExp", "--param", "1"]) == 2

    assert main(["test", "--method", "schott", "--input",
                 str(tmp_path / "no_such.csv")]) == 2


def test_data_error_exits_1(tmp_path, capsys):
    p = write_csv(tmp_path / "bad.csv",
                  [["1", "2"], ["3", "x"], ["5", "6"], ["7", "8"], ["9", "1"]],
                  header=["a", "b"])
    assert main(["test", "--method", "schott", "--input", p]) == 1
    err = capsys.readouterr().err
    assert "row 2" in err and "column b" in err


def test_jobs_env_fallback(monkeypatch, capsys):
    monkeypatch.setenv("ELLIPSYM_JOBS", "abc")
    assert main(["test", "--method", "ks", "--input", GOLDEN_20,
                 "--R", "5", "--seed", "1"]) == 2
    capsys.readouterr()
    monkeypatch.setenv("ELLIPSYM_JOBS", "2")
    assert main(["test", "--method", "ks", "--input", GOLDEN_20,
                 "--R", "5", "--seed", "1"]) == 0


# ---------------------------------------------------------------------------
# rolling windows
# ---------------------------------------------------------------------------


def rolling_input(tmp_path, n=10, with_dates=False, seed=2):
    X = sample_mvn(np.zeros(2), np.eye(2), n, seed=seed)
    rows = [[f"{v:.17g}" for v in row] for row in X]
    header = ["x1", "x2"]
    if with_dates:
        header = ["day"] + header
        rows = [[f"2024-01-{i + 1:02d}"] + row for i, row in enumerate(rows)]
    return write_csv(tmp_path / "roll.csv", rows, header=header)


def rolling_rows(capsys):
    out = capsys.readouterr().out
    reader = csv.reader(io.StringIO(out))
    header = next(reader)
    assert header == ["start", "end", "label", "statistic", "p_value"]
    return list(reader)


def test_rolling_window_step_grid(tmp_path, capsys):
    p = rolling_input(tmp_path, n=10)
    # 10 rows, window 5: step 5 tiles exactly, step 2 stops at start row 5
    assert main(["rolling", "--method", "schott", "--input", p,
                 "--window", "5", "--step", "5"]) == 0
    rows = rolling_rows(capsys)
    assert [(r[0], r[1]) for r in rows] == [("1", "5"), ("6", "10")]

    assert main(["rolling", "--method", "schott", "--input", p,
                 "--window", "5", "--step", "2"]) == 0
    rows = rolling_rows(capsys)
    assert [(r[0], r[1]) for r in rows] == [("1", "5"), ("3", "7"), ("5", "9")]
    for r in rows:
        assert 0.0 < float(r[4]) <= 1.0


def test_rolling_date_labels(tmp_path, capsys):
    p = rolling_input(tmp_path, n=10, with_dates=True)
    assert main(["rolling", "--method", "schott", "--input", p,
                 "--window", "5", "--step", "5", "--date-column", "day"]) == 0
    rows = rolling_rows(capsys)
    assert [r[2] for r in rows] == ["2024-01-01", "2024-01-06"]


def test_rolling_date_column_not_testable(tmp_path, capsys):
    p = rolling_input(tmp_path, n=10, with_dates=True)
    assert main(["rolling", "--method", "schott", "--input", p,
                 "--window", "5", "--step", "5", "--date-column", "day",
                 "--columns", "day,x1"]) == 2
    assert "cannot be tested" in capsys.readouterr().err


def test_rolling_window_bounds(tmp_path, capsys):
    p = rolling_input(tmp_path, n=10)
    assert main(["rolling", "--method", "schott", "--input", p,
                 "--window", "50", "--step", "1"]) == 1
    capsys.readouterr()
    assert main(["rolling", "--method", "schott", "--input", p,
                 "--window", "3", "--step", "1"]) == 2
    assert "at least d + 2" in capsys.readouterr().err


def test_rolling_out_file(tmp_path):
    p = rolling_input(tmp_path, n=12)
    out = str(tmp_path / "windows.csv")
    assert main(["rolling", "--method", "mpq", "--input", p,
                 "--window", "6", "--step", "3", "--out", out]) == 0
    with open(out, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    assert lines[0] == "start,end,label,statistic,p_value"
    assert len(lines) == 1 + 3  # starts 1, 4, 7


# ---------------------------------------------------------------------------
# real process entry point
# ---------------------------------------------------------------------------


def test_module_entry_point_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "ellipsym.cli", "test", "--method", "mpq",
         "--input", GOLDEN_20],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.startswith("\tTest for elliptical symmetry by Manzotti et al.")
