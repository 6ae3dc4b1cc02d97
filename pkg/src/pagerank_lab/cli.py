"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse failure, 2 invalid arguments,
3 a single run finished without converging.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Optional, Sequence

from . import chart, stats
from .engine import PageRankConfig, estimate_iterations, pagerank, reference_ranks
from .graph import load_graph
from .harness import (SweepError, SweepPlan, SweepRecord, default_damping_grid,
                      default_tolerance_grid, format_csv, graph_label, log_line, read_rows, run_sweep)
from .norms import NormKind, error_norm

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_NOT_CONVERGED = 0, 1, 2, 3
NORM_ORDER = {"l1": 0, "l2": 1, "linf": 2}


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _norm_list(text: str) -> list[NormKind]:
    try:
        return [NormKind.parse(t) for t in text.split(",") if t.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _alpha_range(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise UsageError("--alpha-step must be positive")
    if stop < start:
        raise UsageError("--alpha-to must not be below --alpha-from")
    count = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + k * step, 10) for k in range(count + 1)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pagerank-lab",
        description="Pull-based PageRank under varying damping factor, tolerance and convergence norm.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="single PageRank run; prints one CSV record")
    run.add_argument("--graph", required=True, help="MatrixMarket .mtx file")
    run.add_argument("--alpha", type=float, default=0.85)
    run.add_argument("--tolerance", type=float, default=1e-6)
    run.add_argument("--norm", type=NormKind.parse, default=NormKind.L1, help="l1, l2 or linf")
    run.add_argument("--max-iter", type=int, default=500)
    run.add_argument("--repeat", type=int, default=5)

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--graph", "--graphs", dest="graphs", nargs="+", required=True)
    sweep.add_argument("--alpha", type=float)
    sweep.add_argument("--alpha-from", type=float)
    sweep.add_argument("--alpha-to", type=float)
    sweep.add_argument("--alpha-step", type=float)
    sweep.add_argument("--tolerance", type=float)
    sweep.add_argument("--tol-grid", type=_float_list, help="comma list overriding the tolerance grid")
    sweep.add_argument("--norm", "--norms", dest="norms", type=_norm_list, help="comma list of l1,l2,linf")
    sweep.add_argument("--max-iter", type=int, default=500)
    sweep.add_argument("--repeat", type=int, default=5)
    sweep.add_argument("--csv", help="output CSV path (default: stdout)")
    sub.add_parser("sweep-damping", parents=[sweep],
                   help="alpha 0.50..1.00 step 0.05 at tolerance 1e-6, L1")
    sub.add_parser("sweep-tolerance", parents=[sweep],
                   help="tolerance 1e0..1e-10 at alpha 0.85, all norms")
    sub.add_parser("compare-norms", parents=[sweep],
                   help="L1, L2, L-inf at alpha 0.85, tolerance 1e-6")

    ratios = sub.add_parser("ratios", help="composite ratios from a sweep CSV, approaches keyed by norm")
    ratios.add_argument("--input", required=True)
    ratios.add_argument("--metric", choices=("iterations", "time_ms"), default="iterations")
    ratios.add_argument("--baseline", default="l1")
    ratios.add_argument("--method", choices=stats.METHODS + ("all",), default="all")

    est = sub.add_parser("estimate", help="iterations estimate log10(tolerance)/log10(alpha)")
    est.add_argument("--alpha", type=float, required=True)
    est.add_argument("--tolerance", type=float, required=True)

    ch = sub.add_parser("chart", help="SVG line chart from a CSV")
    ch.add_argument("--input", required=True)
    ch.add_argument("--x", required=True)
    ch.add_argument("--y", required=True)
    ch.add_argument("--series")
    ch.add_argument("--log-x", action="store_true")
    ch.add_argument("--out", required=True)
    return parser


def _check_common(max_iter: int, repeat: int) -> None:
    if max_iter < 1:
        raise UsageError("--max-iter must be >= 1")
    if repeat < 1:
        raise UsageError("--repeat must be >= 1")


def cmd_run(args) -> int:
    _check_common(args.max_iter, args.repeat)
    try:
        cfg = PageRankConfig(args.alpha, args.tolerance, args.norm, args.max_iter)
    except ValueError as e:
        raise UsageError(str(e))
    g = load_graph(args.graph)
    ref = reference_ranks(g)
    first = pagerank(g, cfg)
    times = [first.elapsed_ms] + [pagerank(g, cfg).elapsed_ms for _ in range(args.repeat - 1)]
    rec = SweepRecord(graph_label(args.graph), g.vertex_count, g.edge_count, cfg.alpha, cfg.tolerance,
                      cfg.norm.value, first.iterations, first.converged, sum(times) / len(times),
                      error_norm(NormKind.L1, first.ranks, ref))
    sys.stdout.write(format_csv([rec]))
    return EXIT_OK if rec.converged else EXIT_NOT_CONVERGED


SWEEP_DEFAULTS = {
    "sweep-damping": (default_damping_grid, lambda: [1e-6], lambda: [NormKind.L1]),
    "sweep-tolerance": (lambda: [0.85], default_tolerance_grid, lambda: list(NormKind)),
    "compare-norms": (lambda: [0.85], lambda: [1e-6], lambda: list(NormKind)),
}


def sweep_plan(args) -> SweepPlan:
    _check_common(args.max_iter, args.repeat)
    alphas_default, tols_default, norms_default = SWEEP_DEFAULTS[args.command]
    range_flags = (args.alpha_from, args.alpha_to, args.alpha_step)
    if args.alpha is not None:
        alphas = [args.alpha]
    elif any(f is not None for f in range_flags):
        grid = default_damping_grid()
        start = grid[0] if args.alpha_from is None else args.alpha_from
        stop = grid[-1] if args.alpha_to is None else args.alpha_to
        step = 0.05 if args.alpha_step is None else args.alpha_step
        alphas = _alpha_range(start, stop, step)
    else:
        alphas = alphas_default()
    if args.tol_grid is not None:
        tols = args.tol_grid
    elif args.tolerance is not None:
        tols = [args.tolerance]
    else:
        tols = tols_default()
    norms = args.norms if args.norms else norms_default()
    try:
        return SweepPlan(args.graphs, alphas, tols, norms, args.repeat, args.max_iter)
    except ValueError as e:
        raise UsageError(str(e))


def cmd_sweep(args) -> int:
    plan = sweep_plan(args)
    # the per-record log goes to stdout unless stdout carries the CSV itself
    log_stream = sys.stdout if args.csv else sys.stderr

    def echo(rec):
        print(log_line(rec), file=log_stream, flush=True)

    records = run_sweep(plan, on_record=echo)
    text = format_csv(records)
    if args.csv:
        with open(args.csv, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def measurement_matrix(rows: list[dict], metric: str):
    """Approaches from the ``norm`` column, cases from graph/alpha/tolerance.

    Returns the matrix and the list of case labels with non-converged runs.
    """
    if not rows:
        raise ValueError("input has no data rows")
    case_cols = [c for c in ("graph", "alpha", "tolerance") if c in rows[0]]
    for col in ("norm", metric):
        if col not in rows[0]:
            raise ValueError(f"input has no {col!r} column")
    cells = {}
    flagged = []
    for i, row in enumerate(rows, start=2):
        case = "/".join(row[c] for c in case_cols) or "all"
        key = (row["norm"].strip().lower(), case)
        if key in cells:
            raise ValueError(f"line {i}: duplicate cell {key[0]} @ {case}")
        try:
            cells[key] = float(row[metric])
        except ValueError:
            raise ValueError(f"line {i}: {metric} is not numeric: {row[metric]!r}") from None
        if row.get("converged", "true").strip().lower() == "false":
            flagged.append(f"{key[0]} @ {case}")
    approaches = sorted({a for a, _ in cells}, key=lambda a: (NORM_ORDER.get(a, 99), a))
    cases = list(dict.fromkeys(c for _, c in cells))
    missing = [f"{a} @ {c}" for a in approaches for c in cases if (a, c) not in cells]
    if missing:
        raise ValueError("incomplete measurement matrix; missing cells: " + ", ".join(missing))
    values = [[cells[(a, c)] for c in cases] for a in approaches]
    return stats.MeasurementMatrix(approaches, cases, values), flagged


def format_ratio_tables(tables: Sequence[stats.RatioTable], approaches: Sequence[str]) -> str:
    head = ["method", "baseline"] + [f"mean_{a}" for a in approaches] + [f"ratio_{a}" for a in approaches]
    lines = [",".join(head)]
    for t in tables:
        means = [f"{t.means[a]:.2f}" if t.means else "" for a in approaches]
        ratios = [f"{t.ratios[a]:.2f}" for a in approaches]
        lines.append(",".join([t.method, t.baseline] + means + ratios))
    return "\n".join(lines) + "\n"


def cmd_ratios(args) -> int:
    _, rows = read_rows(args.input)
    m, flagged = measurement_matrix(rows, args.metric)
    baseline = args.baseline.strip().lower()
    if baseline not in m.approaches:
        raise UsageError(f"unknown baseline {args.baseline!r}; approaches are {', '.join(m.approaches)}")
    methods = stats.METHODS if args.method == "all" else (args.method,)
    tables = stats.all_tables(m, baseline, methods)
    sys.stdout.write(format_ratio_tables(tables, m.approaches))
    if flagged:
        print(f"note: {len(flagged)} non-converged cell(s) included as-is: {', '.join(flagged)}",
              file=sys.stderr)
    return EXIT_OK


def cmd_estimate(args) -> int:
    try:
        print(estimate_iterations(args.alpha, args.tolerance))
    except ValueError as e:
        raise UsageError(str(e))
    return EXIT_OK


def cmd_chart(args) -> int:
    header, rows = read_rows(args.input)
    if not rows:
        raise UsageError(f"{args.input}: no data rows to plot")
    for col in (args.x, args.y, args.series):
        if col is not None and col not in header:
            raise UsageError(f"unknown column {col!r}; columns are {', '.join(header)}")
    groups: dict = {}
    for row in rows:
        name = row[args.series] if args.series else args.y
        try:
            x, y = float(row[args.x]), float(row[args.y])
        except ValueError:
            raise UsageError(f"columns {args.x!r} and {args.y!r} must be numeric") from None
        groups.setdefault(name, {}).setdefault(x, []).append(y)
    # repeated x within a series (several graphs) is averaged
    series = {name: [(x, sum(ys) / len(ys)) for x, ys in sorted(pts.items())]
              for name, pts in groups.items()}
    try:
        svg = chart.line_chart(series, x_label=args.x, y_label=args.y, log_x=args.log_x,
                               title=f"{args.y} vs {args.x}")
    except ValueError as e:
        raise UsageError(str(e))
    with open(args.out, "w") as f:
        f.write(svg)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "sweep-damping": cmd_sweep,
    "sweep-tolerance": cmd_sweep,
    "compare-norms": cmd_sweep,
    "ratios": cmd_ratios,
    "estimate": cmd_estimate,
    "chart": cmd_chart,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"pagerank-lab: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, SweepError) as e:
        print(f"pagerank-lab: error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
