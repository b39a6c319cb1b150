"""Command-line interface.

Subcommands:

* ``defect-table``  classify homoscedastic secants over (n, k, d) ranges
* ``fit2``          two-component recovery from a CSV of observations
* ``fit1d``         univariate k-component recovery from moments or a CSV
* ``rank-test``     secant membership ladder / component-count estimate
* ``simulate``      draw reproducible samples from given parameters

All JSON output carries ``"schema": "homoment/1"``.  Exit codes: 0
success, 2 unusable input, 3 input inconsistent with the requested
model, 4 internal check failure (``defect-table --check`` mismatch).
"""

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import estimate, geometry, models, ranktest
from .errors import HomomentError, InputError, ModelMismatchError

SCHEMA = "homoment/1"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_MODEL = 3
EXIT_CHECK = 4

TABLE_COLUMNS = ("n", "k", "d", "par", "N", "exp", "dim", "delta", "Delta")


def _default_seed():
    env = os.environ.get("HOMOMENT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise InputError(f"HOMOMENT_SEED must be an integer, got {env!r}")


def _parse_range(text, name):
    """``'3'`` or ``'1..7'`` into an inclusive list."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise InputError(f"--{name} expects an integer or lo..hi, got {text!r}")


def _parse_moments(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"--moments expects comma-separated numbers, got {text!r}")
    if not values:
        raise InputError("empty moment vector", code="INPUT_EMPTY")
    return values


def read_csv_matrix(path):
    """Numeric rows from a CSV file; one optional header line is skipped."""
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            rows = [row for row in csv.reader(handle) if any(c.strip() for c in row)]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}", code="INPUT_IO")
    if rows:
        try:
            [float(c) for c in rows[0]]
        except ValueError:
            rows = rows[1:]
    if not rows:
        raise InputError(f"no data rows in {path}", code="INPUT_EMPTY")
    width = len(rows[0])
    data = []
    for lineno, row in enumerate(rows, start=1):
        if len(row) != width:
            raise InputError(f"row {lineno} has {len(row)} cells, expected {width}",
                             code="INPUT_PARSE")
        try:
            data.append([float(c) for c in row])
        except ValueError as exc:
            raise InputError(f"non-numeric cell in row {lineno}: {exc}",
                             code="INPUT_PARSE")
    return data


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
            if not text.endswith("\n"):
                handle.write("\n")
    else:
        print(text)


def _emit_json(payload, output):
    _emit(json.dumps(payload, indent=2), output)


# ----------------------------------------------------------------------
# defect-table


def _cell(args):
    n, k, d, seed = args
    return geometry.defect_report(n, k, d, seed=seed)


def _table_cells(ns, ks, ds, seed, jobs):
    cells = []
    for n in ns:
        for d in ds:
            k_list = ks if ks is not None else geometry.default_k_range(n, d)
            for k in k_list:
                cells.append((n, k, d, seed))
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_cell, cells))
    return [_cell(c) for c in cells]


def _check_rows(reports):
    mismatches = []
    for r in reports:
        if r.d != 3:
            continue
        predicted = geometry.predicted_defect_order3(r.n, r.k)
        if predicted != r.defect:
            mismatches.append(f"(n={r.n},k={r.k},d=3): computed defect "
                              f"{r.defect}, classifier {predicted}")
        reference = geometry.order3_reference_row(r.n, r.k)
        if reference is not None and reference != r.as_row():
            mismatches.append(f"(n={r.n},k={r.k},d=3): computed row "
                              f"{r.as_row()}, published {reference}")
    return mismatches


def _format_table(reports):
    rows = [TABLE_COLUMNS] + [tuple(str(v) for v in r.as_row()) for r in reports]
    widths = [max(len(row[i]) for row in rows) for i in range(len(TABLE_COLUMNS))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(row, widths))
             for row in rows]
    return "\n".join(lines)


def cmd_defect_table(args):
    ns = _parse_range(args.n, "n")
    ks = _parse_range(args.k, "k") if args.k else None
    ds = _parse_range(args.d, "d")
    reports = _table_cells(ns, ks, ds, args.seed, args.jobs)
    mismatches = _check_rows(reports) if args.check else []
    if args.format == "json":
        payload = {
            "schema": SCHEMA,
            "command": "defect-table",
            "rows": [r.as_dict() for r in reports],
        }
        if args.check:
            payload["check"] = {"passed": not mismatches, "mismatches": mismatches}
        _emit_json(payload, args.output)
    elif args.format == "csv":
        lines = [",".join(TABLE_COLUMNS)]
        lines += [",".join(str(v) for v in r.as_row()) for r in reports]
        _emit("\n".join(lines), args.output)
    else:
        text = _format_table(reports)
        if args.check:
            status = "ok" if not mismatches else "MISMATCH"
            text += f"\ncheck: {status} ({len(reports)} rows)"
            text += "".join("\n  " + m for m in mismatches)
        _emit(text, args.output)
    if mismatches:
        print(f"defect-table --check failed: {len(mismatches)} mismatch(es)",
              file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


# ----------------------------------------------------------------------
# fitting


def cmd_fit2(args):
    data = read_csv_matrix(args.input)
    degree = args.order
    cumulants = estimate.sample_cumulants(data, degree)
    estimates = estimate.fit_two_gaussians(cumulants, order=args.order)
    payload = {
        "schema": SCHEMA,
        "command": "fit2",
        "order": args.order,
        "count": len(data),
        "estimates": [e.as_dict() for e in estimates],
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_fit1d(args):
    if (args.moments is None) == (args.input is None):
        raise InputError("provide exactly one of --moments or --input")
    if args.moments is not None:
        moments = _parse_moments(args.moments)
    else:
        data = read_csv_matrix(args.input)
        if any(len(row) != 1 for row in data):
            raise InputError("fit1d expects a single-column CSV")
        moments = ranktest.raw_moments([row[0] for row in data], 2 * args.k)
    result = estimate.fit_univariate(moments, args.k)
    payload = {
        "schema": SCHEMA,
        "command": "fit1d",
        "k": args.k,
        "estimate": result.as_dict(),
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_rank_test(args):
    moments = _parse_moments(args.moments)
    verdicts = ranktest.component_ladder(moments, args.kmax,
                                         threshold=args.threshold)
    k_hat = next((v.k for v in verdicts if v.on_model), args.kmax + 1)
    payload = {
        "schema": SCHEMA,
        "command": "rank-test",
        "k_max": args.kmax,
        "estimated_components": k_hat,
        "verdicts": [v.as_dict() for v in verdicts],
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_simulate(args):
    try:
        with open(args.params, encoding="utf-8") as handle:
            spec = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {args.params}: {exc}", code="INPUT_IO")
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {args.params}: {exc}",
                         code="INPUT_PARSE")
    params = models.HomoscedasticParams.from_dict(spec)
    draws = models.sample_mixture(params, args.count, args.seed)
    lines = [",".join(f"{x:.17g}" for x in row) for row in draws]
    _emit("\n".join(lines), args.output)
    return EXIT_OK


# ----------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="homoment",
        description="Moment-based analysis and recovery for homoscedastic "
                    "Gaussian mixtures")
    sub = parser.add_subparsers(dest="command", required=True)

    table = sub.add_parser("defect-table",
                           help="dimension/defect classification table")
    table.add_argument("--n", default="1..7", help="dimension range, e.g. 1..7")
    table.add_argument("--k", default=None,
                       help="component range; default covers the published rows")
    table.add_argument("--d", default="3", help="moment order range")
    table.add_argument("--seed", type=int, default=None)
    table.add_argument("--check", action="store_true",
                       help="verify rows against the closed-form classifier "
                            "and the published table")
    table.add_argument("--format", choices=("table", "json", "csv"),
                       default="table")
    table.add_argument("--jobs", type=int, default=1,
                       help="parallel workers (cells are independent)")
    table.add_argument("--output", default=None)
    table.set_defaults(func=cmd_defect_table)

    fit2 = sub.add_parser("fit2", help="two-component fit from a CSV sample")
    fit2.add_argument("--input", required=True, help="CSV of observations")
    fit2.add_argument("--order", type=int, choices=(4, 5), default=5)
    fit2.add_argument("--output", default=None)
    fit2.set_defaults(func=cmd_fit2)

    fit1d = sub.add_parser("fit1d", help="univariate k-component fit")
    fit1d.add_argument("--k", type=int, required=True)
    fit1d.add_argument("--moments", default=None,
                       help="comma-separated m_1..m_2k")
    fit1d.add_argument("--input", default=None, help="single-column CSV")
    fit1d.add_argument("--output", default=None)
    fit1d.set_defaults(func=cmd_fit1d)

    rank = sub.add_parser("rank-test", help="secant membership ladder")
    rank.add_argument("--moments", required=True,
                      help="comma-separated m_1..m_d with d >= 2*kmax+1")
    rank.add_argument("--kmax", type=int, required=True)
    rank.add_argument("--threshold", type=float,
                      default=ranktest.DEFAULT_THRESHOLD)
    rank.add_argument("--output", default=None)
    rank.set_defaults(func=cmd_rank_test)

    sim = sub.add_parser("simulate", help="reproducible mixture samples")
    sim.add_argument("--params", required=True,
                     help="JSON with means, weights, cov")
    sim.add_argument("--count", type=int, required=True)
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--output", default=None)
    sim.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "seed") and args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except InputError as exc:
        _report_error(exc)
        return EXIT_INPUT
    except ModelMismatchError as exc:
        _report_error(exc)
        return EXIT_MODEL
    except HomomentError as exc:
        _report_error(exc)
        return EXIT_INPUT


def _report_error(exc):
    payload = {"schema": SCHEMA,
               "error": {"code": exc.code, "message": str(exc)}}
    print(json.dumps(payload), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
