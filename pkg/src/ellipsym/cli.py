"""Command-line front end: CSV in, test reports out.

Three subcommands:

``ellipsym test``      run one test on a CSV file, print a text block or JSON
``ellipsym rolling``   run one test on successive row windows, emit a CSV
``ellipsym simulate``  write a synthetic CSV sample for the other commands

Exit codes: 0 success, 1 computation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from typing import Optional

import numpy as np

from .estimators import validate_sample
from .exceptions import (
    DataError,
    DomainError,
    EllipsymError,
    ParseError,
    UsageError,
)
from .hypothesis import (
    HP_SECTORS,
    METHOD_LABELS,
    TestResult,
    huffer_park_test,
    ks_test,
    mpq_test,
    pseudo_gaussian_test,
    schott_test,
    skew_optimal_test,
)
from .distributions import sample_mvn, sample_mvt, sample_skewed
from .resample import ALL_BUT_ONE

ALTERNATIVE_LINE = (
    "alternative hypothesis: the distribution is not elliptically symmetric"
)


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------


def read_table(path: str, has_header: bool = True):
    """Raw CSV contents as (column names or None, list of string rows)."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot open {path}: {exc}") from exc
    with fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise DataError(f"{path} contains no data")
    names = None
    if has_header:
        names = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        if not rows:
            raise DataError(f"{path} has a header row but no data rows")
    return names, rows


def _resolve_columns(columns, names, width: int) -> list:
    """Translate a selection of names / 1-based indices to 0-based indices."""
    if columns is None:
        return list(range(width))
    out = []
    for token in columns:
        token = token.strip()
        if names is not None and token in names:
            out.append(names.index(token))
            continue
        try:
            j = int(token)
        except ValueError:
            raise UsageError(f"unknown column {token!r}") from None
        if not 1 <= j <= width:
            raise UsageError(f"column index {j} is out of range 1..{width}")
        out.append(j - 1)
    if len(set(out)) != len(out):
        raise UsageError("the column selection repeats a column")
    if not out:
        raise UsageError("the column selection is empty")
    return out


def _numeric_matrix(names, rows, selection) -> np.ndarray:
    """Parse the selected cells into a float matrix with located errors."""
    width = len(rows[0])
    X = np.empty((len(rows), len(selection)))
    for i, row in enumerate(rows, start=1):
        if len(row) != width:
            raise ParseError(f"row {i} has {len(row)} fields, expected {width}")
        for k, j in enumerate(selection):
            cell = row[j].strip()
            label = names[j] if names else str(j + 1)
            if cell == "" or cell.upper() in ("NA", "NAN"):
                raise DataError(f"missing value at row {i}, column {label}")
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(
                    f"non-numeric value {cell!r} at row {i}, column {label}"
                ) from None
            if not math.isfinite(value):
                raise DataError(f"non-finite value at row {i}, column {label}")
            X[i - 1, k] = value
    return X


def ingest_csv(path: str, has_header: bool = True, columns=None) -> np.ndarray:
    """Read an (n, d) sample from a CSV file.

    ``columns`` optionally selects a subset by header name or 1-based
    index.  A non-numeric cell raises :class:`ParseError` and an empty or
    NA cell raises :class:`DataError`, both naming the row and column; a
    sample with too few rows or columns raises :class:`DomainError`.
    """
    names, rows = read_table(path, has_header)
    selection = _resolve_columns(columns, names, len(rows[0]))
    return validate_sample(_numeric_matrix(names, rows, selection))


# ---------------------------------------------------------------------------
# shared method dispatch
# ---------------------------------------------------------------------------


def _split_tokens(text: str) -> list:
    return [t for t in text.split(",") if t.strip() != ""]


def _parse_location(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise UsageError(
            f"--location must be comma-separated numbers, got {text!r}"
        ) from None


def _resolve_jobs(jobs: Optional[int]) -> int:
    if jobs is not None:
        return jobs
    env = os.environ.get("ELLIPSYM_JOBS")
    if env is None:
        return ALL_BUT_ONE
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"ELLIPSYM_JOBS must be an integer, got {env!r}") from None


def _run_method(X: np.ndarray, args) -> TestResult:
    jobs = _resolve_jobs(args.jobs)
    method = args.method
    if method == "ks":
        R = 1000 if args.R is None else args.R
        return ks_test(X, R=R, seed=args.seed, workers=jobs)
    if method == "mpq":
        return mpq_test(X, epsilon=args.epsilon)
    if method == "schott":
        return schott_test(X)
    if method == "hp":
        if args.c is None:
            raise UsageError("--c (number of radial shells) is required for hp")
        return huffer_park_test(
            X,
            args.c,
            sector=args.sector,
            g=args.g,
            R=args.R,
            seed=args.seed,
            workers=jobs,
        )
    if method == "pg":
        return pseudo_gaussian_test(X, location=args.location)
    return skew_optimal_test(X, location=args.location, f=args.f, param=args.param)


def format_text_block(result: TestResult, data_name: str) -> str:
    """The classic hypothesis-test report block."""
    return (
        f"\t{result.label}\n"
        "\n"
        f"data:  {data_name}\n"
        f"statistic = {result.statistic:.5g}, p-value = {result.p_value:.4g}\n"
        f"{ALTERNATIVE_LINE}"
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_test(args) -> int:
    X = ingest_csv(args.input, has_header=not args.no_header, columns=args.columns)
    result = _run_method(X, args)
    if args.format == "json":
        print(json.dumps(result.describe(), indent=2))
    else:
        name = os.path.splitext(os.path.basename(args.input))[0]
        print(format_text_block(result, name))
    return 0


def cmd_rolling(args) -> int:
    if args.step < 1:
        raise UsageError(f"--step must be at least 1, got {args.step}")
    names, rows = read_table(args.input, has_header=not args.no_header)

    columns = args.columns
    date_index = None
    if args.date_column is not None:
        if names is None or args.date_column not in names:
            raise UsageError(f"date column {args.date_column!r} not found in header")
        date_index = names.index(args.date_column)
        if columns is None:
            columns = [c for c in names if c != args.date_column]

    selection = _resolve_columns(columns, names, len(rows[0]))
    if date_index is not None and date_index in selection:
        raise UsageError(f"date column {args.date_column!r} cannot be tested")
    X = validate_sample(_numeric_matrix(names, rows, selection))

    n, d = X.shape
    window, step = args.window, args.step
    if window > n:
        raise DomainError(f"window of {window} rows exceeds the {n} available")
    if window < d + 2:
        raise UsageError(f"window must be at least d + 2 = {d + 2} rows, got {window}")

    labels = (
        [row[date_index].strip() for row in rows]
        if date_index is not None
        else [""] * n
    )

    out_rows = []
    for start in range(0, n - window + 1, step):
        result = _run_method(X[start : start + window], args)
        out_rows.append(
            (
                start + 1,
                start + window,
                labels[start],
                f"{result.statistic:.10g}",
                f"{result.p_value:.10g}",
            )
        )

    def emit(stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["start", "end", "label", "statistic", "p_value"])
        writer.writerows(out_rows)

    if args.out is not None:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            emit(fh)
    else:
        emit(sys.stdout)
    return 0


def cmd_simulate(args) -> int:
    n, d = args.n, args.d
    if n < 1:
        raise UsageError(f"--n must be at least 1, got {n}")
    if d < 2:
        raise UsageError(f"--d must be at least 2, got {d}")
    if args.dist == "normal":
        X = sample_mvn(np.zeros(d), np.eye(d), n, args.seed)
    elif args.dist == "t":
        X = sample_mvt(np.zeros(d), np.eye(d), args.nu, n, args.seed)
    else:
        X = sample_skewed(d, n, args.slant, args.seed)

    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{j + 1}" for j in range(d)])
        for row in X:
            writer.writerow([f"{v:.17g}" for v in row])
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _add_test_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--method",
        required=True,
        choices=sorted(METHOD_LABELS),
        help="which elliptical-symmetry test to run",
    )
    parser.add_argument("--input", required=True, help="CSV file, one row per observation")
    parser.add_argument(
        "--no-header",
        action="store_true",
        help="the CSV has no header row (columns are then addressed by index)",
    )
    parser.add_argument(
        "--columns",
        type=_split_tokens,
        default=None,
        metavar="A,B,...",
        help="columns to use, by header name or 1-based index (default: all)",
    )
    parser.add_argument(
        "--R",
        type=int,
        default=None,
        help="bootstrap replicates (ks default 1000; hp default: Monte-Carlo calibration)",
    )
    parser.add_argument(
        "--epsilon", type=float, default=0.05, help="mpq radial trimming fraction"
    )
    parser.add_argument("--c", type=int, default=None, help="hp: number of radial shells")
    parser.add_argument(
        "--sector", choices=list(HP_SECTORS), default="orthants", help="hp: sector scheme"
    )
    parser.add_argument(
        "--g", type=int, default=None, help="hp: sector count for bivariate angles"
    )
    parser.add_argument(
        "--f",
        choices=["t", "logistic", "powerExp"],
        default="t",
        help="so: radial density family",
    )
    parser.add_argument(
        "--param",
        type=float,
        default=None,
        help="so: radial density parameter (t default 4, powerExp default 0.5)",
    )
    parser.add_argument(
        "--location",
        type=_parse_location,
        default=None,
        metavar="X1,X2,...",
        help="pg/so: known location; omitted means the location is estimated",
    )
    parser.add_argument("--seed", type=int, default=0, help="resampling seed")
    parser.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="worker threads for resampling; -1 = all but one core "
        "(falls back to the ELLIPSYM_JOBS environment variable)",
    )
    parser.add_argument("--format", choices=["text", "json"], default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellipsym",
        description="Hypothesis tests for elliptical symmetry of multivariate data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run one test on a CSV sample")
    _add_test_flags(p_test)

    p_roll = sub.add_parser(
        "rolling", help="run one test on successive row windows of a CSV sample"
    )
    _add_test_flags(p_roll)
    p_roll.add_argument("--window", type=int, required=True, help="rows per window")
    p_roll.add_argument("--step", type=int, required=True, help="rows between window starts")
    p_roll.add_argument(
        "--date-column",
        default=None,
        help="header name of a label column copied to each output row",
    )
    p_roll.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    p_sim = sub.add_parser("simulate", help="write a synthetic CSV sample")
    p_sim.add_argument(
        "--dist", required=True, choices=["normal", "t", "skewnormal"]
    )
    p_sim.add_argument("--n", type=int, required=True, help="number of rows")
    p_sim.add_argument("--d", type=int, required=True, help="number of columns")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--nu", type=float, default=4.0, help="t: degrees of freedom")
    p_sim.add_argument("--slant", type=float, default=1.0, help="skewnormal: slant")
    p_sim.add_argument("--out", required=True, help="output CSV path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "test":
            return cmd_test(args)
        if args.command == "rolling":
            return cmd_rolling(args)
        return cmd_simulate(args)
    except UsageError as exc:
        print(f"ellipsym: error: {exc}", file=sys.stderr)
        return 2
    except EllipsymError as exc:
        print(f"ellipsym: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
