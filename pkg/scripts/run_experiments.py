#!/usr/bin/env python3
"""Run the damping, norm and tolerance experiments and write CSVs, ratio tables and charts.

With no --graphs a desk-scale synthetic set is generated. For the full-size
study, download the SuiteSparse graphs by hand (see README) and pass them:

    python scripts/run_experiments.py --graphs ~/suitesparse/*.mtx --out results/
"""

import argparse
import logging
import sys
from pathlib import Path

from pagerank_lab import stats
from pagerank_lab.cli import format_ratio_tables, main as cli_main, measurement_matrix
from pagerank_lab.harness import (SweepPlan, default_damping_grid, default_tolerance_grid, detect_sensitivity,
                                  read_rows, run_sweep, write_csv)
from pagerank_lab.norms import NormKind
from pagerank_lab.synthetic import circulant, scale_free, write_matrix_market

SYNTHETIC = {
    "web-a": lambda: scale_free(5_000, seed=1),
    "web-b": lambda: scale_free(20_000, m=6, seed=2),
    "web-c": lambda: scale_free(50_000, seed=3, dangling_fraction=0.2),
    "ring3": lambda: circulant(200_000, 3),
}


def synthetic_graphs(out: Path) -> list[str]:
    gdir = out / "graphs"
    gdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, make in SYNTHETIC.items():
        path = gdir / f"{name}.mtx"
        if not path.exists():
            write_matrix_market(make(), path, comment=f"synthetic {name}")
        paths.append(str(path))
    return paths


def damping_summary(records) -> str:
    """GM-RATIO of iterations for each alpha against alpha = 0.85, across graphs."""
    alphas = sorted({r.alpha for r in records})
    graphs = sorted({r.graph for r in records})
    cell = {(r.alpha, r.graph): r.iterations for r in records}
    m = stats.MeasurementMatrix([str(a) for a in alphas], graphs,
                                [[cell[(a, g)] for g in graphs] for a in alphas])
    t = stats.mean_then_ratio(m, "0.85", "gm")
    lines = ["alpha,gm_iterations,gm_ratio_vs_0.85"]
    lines += [f"{a},{t.means[a]:.2f},{t.ratios[a]:.3f}" for a in m.approaches]
    return "\n".join(lines) + "\n"


def chart(csv_path: Path, x: str, y: str, series: str | None, log_x: bool) -> None:
    argv = ["chart", "--input", str(csv_path), "--x", x, "--y", y,
            "--out", str(csv_path.with_suffix(f".{y}.svg"))]
    if series:
        argv += ["--series", series]
    if log_x:
        argv.append("--log-x")
    cli_main(argv)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--graphs", nargs="+", help=".mtx files (default: generated synthetic set)")
    ap.add_argument("--out", default="results", type=Path)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--precision", choices=("float64", "float32"), default="float64")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    args.out.mkdir(parents=True, exist_ok=True)
    graphs = args.graphs or synthetic_graphs(args.out)
    common = dict(repeats=args.repeat, precision=args.precision)

    damping = run_sweep(SweepPlan(graphs, default_damping_grid(), [1e-6], [NormKind.L1], **common))
    write_csv(damping, args.out / "damping.csv")
    (args.out / "damping_summary.csv").write_text(damping_summary(damping))
    chart(args.out / "damping.csv", "alpha", "iterations", "graph", False)

    norms = run_sweep(SweepPlan(graphs, [0.85], [1e-6], list(NormKind), **common))
    write_csv(norms, args.out / "norms.csv")
    _, rows = read_rows(args.out / "norms.csv")
    for metric in ("iterations", "time_ms"):
        m, _ = measurement_matrix(rows, metric)
        text = "".join(format_ratio_tables(stats.all_tables(m, b), m.approaches) for b in ("l1", "linf"))
        (args.out / f"norms_ratios_{metric}.csv").write_text(text)

    tolerance = run_sweep(SweepPlan(graphs, [0.85], default_tolerance_grid(), list(NormKind), **common))
    write_csv(tolerance, args.out / "tolerance.csv")
    chart(args.out / "tolerance.csv", "tolerance", "iterations", "norm", True)
    report = detect_sensitivity(tolerance)
    lines = ["graph,norm,first_failing_tolerance,single_iteration_tolerances"]
    for (g, n), e in sorted(report.entries.items()):
        first = "" if e.first_failing_tolerance is None else repr(e.first_failing_tolerance)
        lines.append(f"{g},{n},{first},{' '.join(map(repr, e.single_iteration_tolerances))}")
    (args.out / "sensitivity.csv").write_text("\n".join(lines) + "\n")

    print((args.out / "damping_summary.csv").read_text())
    print((args.out / "norms_ratios_iterations.csv").read_text())
    print((args.out / "sensitivity.csv").read_text())
    return 0


if __name__ == "__main__":
    sys.exit(main())
