"""Parameter sweeps over graphs, with repeat-averaged timing and CSV output."""

from __future__ import annotations

import csv
import io
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .engine import DEFAULT_MAX_ITERATIONS, PageRankConfig, pagerank, reference_ranks
from .graph import CsrGraph, load_graph
from .norms import NormKind, error_norm

log = logging.getLogger(__name__)

CSV_HEADER = ("graph", "vertices", "edges", "alpha", "tolerance", "norm",
              "iterations", "converged", "time_ms", "err_vs_ref")
THREADS_ENV = "PAGERANK_LAB_THREADS"


def default_damping_grid() -> list[float]:
    """0.50, 0.55, ..., 1.00."""
    return [round(0.50 + 0.05 * k, 2) for k in range(11)]


def default_tolerance_grid(smallest_exponent: int = 10) -> list[float]:
    """Descending 1e0, 5e-1, 1e-1, 5e-2, ..., down to ``10**-smallest_exponent``."""
    grid = []
    for k in range(smallest_exponent + 1):
        grid.append(float(f"1e-{k}"))
        if k < smallest_exponent:
            grid.append(float(f"5e-{k + 1}"))
    return grid


@dataclass
class SweepPlan:
    graphs: Sequence[str]
    alphas: Sequence[float]
    tolerances: Sequence[float]
    norms: Sequence[NormKind]
    repeats: int = 5
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    precision: str = "float64"

    def __post_init__(self):
        for name in ("graphs", "alphas", "tolerances", "norms"):
            if not getattr(self, name):
                raise ValueError(f"sweep plan has no {name}")
        if any(not (0.0 <= a <= 1.0) for a in self.alphas):
            raise ValueError("alphas must lie in [0, 1]")
        if any(not (t > 0) for t in self.tolerances):
            raise ValueError("tolerances must be positive")
        if self.repeats < 1 or self.max_iterations < 1:
            raise ValueError("repeats and max_iterations must be >= 1")
        self.norms = [n if isinstance(n, NormKind) else NormKind.parse(n) for n in self.norms]


@dataclass(frozen=True)
class SweepRecord:
    graph: str
    vertices: int
    edges: int
    alpha: float
    tolerance: float
    norm: str
    iterations: int
    converged: bool
    time_ms: float
    err_vs_ref: float

    def sort_key(self):
        return (self.graph, self.norm, self.alpha, -self.tolerance)

    def csv_row(self) -> list[str]:
        return [self.graph, str(self.vertices), str(self.edges), repr(self.alpha),
                repr(self.tolerance), self.norm, str(self.iterations),
                "true" if self.converged else "false", repr(self.time_ms), repr(self.err_vs_ref)]

    @classmethod
    def from_row(cls, row: dict) -> "SweepRecord":
        conv = row["converged"].strip().lower()
        if conv not in ("true", "false"):
            raise ValueError(f"converged must be true/false, got {row['converged']!r}")
        return cls(row["graph"], int(row["vertices"]), int(row["edges"]), float(row["alpha"]),
                   float(row["tolerance"]), row["norm"], int(row["iterations"]), conv == "true",
                   float(row["time_ms"]), float(row["err_vs_ref"]))


class SweepError(RuntimeError):
    pass


def graph_label(path) -> str:
    return Path(path).stem


def thread_cap() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
        except ValueError:
            raise SweepError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
        if value < 1:
            raise SweepError(f"{THREADS_ENV} must be >= 1")
        return value
    return os.cpu_count() or 1


def sweep_graph(g: CsrGraph, label: str, plan: SweepPlan,
                on_record: Optional[Callable[[SweepRecord], None]] = None) -> list[SweepRecord]:
    """All (alpha, tolerance, norm) cells of ``plan`` for one loaded graph."""
    # the reference run doubles as the untimed warm-up
    ref = reference_ranks(g)
    records = []
    for alpha in plan.alphas:
        for tol in plan.tolerances:
            for norm in plan.norms:
                cfg = PageRankConfig(alpha, tol, norm, plan.max_iterations, plan.precision)
                first = pagerank(g, cfg)
                times = [first.elapsed_ms]
                for _ in range(plan.repeats - 1):
                    again = pagerank(g, cfg)
                    if again.iterations != first.iterations or again.converged != first.converged:
                        raise SweepError(f"{label}: non-deterministic run at alpha={alpha} "
                                         f"tolerance={tol} norm={norm}")
                    times.append(again.elapsed_ms)
                rec = SweepRecord(
                    graph=label, vertices=g.vertex_count, edges=g.edge_count,
                    alpha=float(alpha), tolerance=float(tol), norm=norm.value,
                    iterations=first.iterations, converged=first.converged,
                    time_ms=sum(times) / len(times),
                    err_vs_ref=error_norm(NormKind.L1, first.ranks, ref),
                )
                if on_record is not None:
                    on_record(rec)
                records.append(rec)
    return records


def _load(path) -> CsrGraph:
    try:
        return load_graph(path)
    except OSError as e:
        raise SweepError(f"cannot read graph {os.fspath(path)}: {e.strerror or e}") from e
    except ValueError as e:
        raise SweepError(f"cannot parse graph {os.fspath(path)}: {e}") from e


def run_sweep(plan: SweepPlan, on_record: Optional[Callable[[SweepRecord], None]] = None,
              threads: Optional[int] = None) -> list[SweepRecord]:
    """Run every (graph, alpha, tolerance, norm) cell; rows come back sorted.

    Graphs are processed concurrently (at most ``threads``, default from
    ``PAGERANK_LAB_THREADS`` or the CPU count); the cells of one graph run
    one after another so their timings do not contend. ``on_record`` may be
    called from worker threads.
    """
    threads = threads or thread_cap()
    # load everything first so a bad file aborts before any timing work
    graphs = [(graph_label(p), _load(p)) for p in plan.graphs]

    def work(item):
        label, g = item
        log.info("sweeping %s (%d vertices, %d edges)", label, g.vertex_count, g.edge_count)
        return sweep_graph(g, label, plan, on_record)

    workers = max(1, min(threads, len(graphs)))
    if workers == 1:
        parts = [work(item) for item in graphs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, graphs))
    records = [r for part in parts for r in part]
    records.sort(key=SweepRecord.sort_key)
    return records


def format_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def write_csv(records: Iterable[SweepRecord], path) -> None:
    with open(path, "w", newline="") as f:
        f.write(format_csv(records))


def read_rows(path) -> tuple[list[str], list[dict]]:
    """Header and rows of any CSV file, as strings."""
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        rows = list(reader)
        return list(reader.fieldnames or []), rows


def read_csv(path) -> list[SweepRecord]:
    header, rows = read_rows(path)
    missing = [c for c in CSV_HEADER if c not in header]
    if missing:
        raise ValueError(f"{path}: missing columns {missing}")
    return [SweepRecord.from_row(r) for r in rows]


def log_line(rec: SweepRecord) -> str:
    return (f"{rec.graph} alpha={rec.alpha!r} tolerance={rec.tolerance!r} norm={rec.norm} "
            f"iterations={rec.iterations} converged={'true' if rec.converged else 'false'} "
            f"time_ms={rec.time_ms:.3f} err_vs_ref={rec.err_vs_ref!r}")


@dataclass
class SensitivityEntry:
    first_failing_tolerance: Optional[float] = None
    single_iteration_tolerances: list = field(default_factory=list)
    # every tolerance whose run hit the iteration cap, descending
    failing_tolerances: list = field(default_factory=list)

    @property
    def closure_violations(self) -> list:
        """Failing tolerances followed by a converged, smaller tolerance."""
        if self.first_failing_tolerance is None:
            return list(self.failing_tolerances)
        return [t for t in self.failing_tolerances if t > self.first_failing_tolerance]


@dataclass
class SensitivityReport:
    entries: dict  # (graph, norm) -> SensitivityEntry

    def __getitem__(self, key) -> SensitivityEntry:
        return self.entries[key]


def detect_sensitivity(records: Sequence[SweepRecord],
                       grid: Optional[Sequence[float]] = None) -> SensitivityReport:
    """Find where each (graph, norm) series starts hitting the iteration cap.

    ``first_failing_tolerance`` is the largest tolerance from which every
    smaller one also fails to converge. ``grid`` defaults to the union of
    tolerances in ``records``; every series must cover all of it exactly once.
    """
    if grid is None:
        grid = sorted({r.tolerance for r in records}, reverse=True)
    else:
        grid = sorted(grid, reverse=True)
    groups: dict = {}
    for r in records:
        groups.setdefault((r.graph, r.norm), []).append(r)

    entries = {}
    for key, recs in sorted(groups.items()):
        alphas = {r.alpha for r in recs}
        if len(alphas) > 1:
            raise ValueError(f"{key}: records mix damping factors {sorted(alphas)}")
        by_tol = {}
        for r in recs:
            if r.tolerance in by_tol:
                raise ValueError(f"{key}: duplicate tolerance {r.tolerance!r}")
            by_tol[r.tolerance] = r
        gaps = [t for t in grid if t not in by_tol]
        extra = [t for t in by_tol if t not in grid]
        if gaps or extra:
            raise ValueError(f"{key}: tolerance grid has gaps {gaps} or stray values {extra}")
        series = [by_tol[t] for t in grid]

        entry = SensitivityEntry()
        entry.single_iteration_tolerances = [r.tolerance for r in series if r.iterations == 1]
        entry.failing_tolerances = [r.tolerance for r in series if not r.converged]
        for r in reversed(series):
            if r.converged:
                break
            entry.first_failing_tolerance = r.tolerance
        entries[key] = entry
    return SensitivityReport(entries)
