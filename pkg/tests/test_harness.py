import csv
import io
import math

import pytest

from conftest import FIXTURES, fixture_graphs
from pagerank_lab.engine import estimate_iterations
from pagerank_lab.graph import build_csr
from pagerank_lab.harness import (CSV_HEADER, SweepError, SweepPlan, SweepRecord, default_damping_grid,
                                  default_tolerance_grid, detect_sensitivity, format_csv, read_csv,
                                  run_sweep, sweep_graph, thread_cap, write_csv)
from pagerank_lab.norms import NormKind
from pagerank_lab.synthetic import scale_free, write_matrix_market

ALL = list(NormKind)


def test_damping_grid():
    grid = default_damping_grid()
    assert len(grid) == 11
    assert grid[0] == 0.50 and grid[-1] == 1.00
    assert 0.85 in grid
    assert all(round(a, 2) == a for a in grid)


def test_tolerance_grid():
    grid = default_tolerance_grid()
    # independent enumeration: 10^-k followed by 5*10^-(k+1)
    expected = []
    for k in range(11):
        expected.append(10.0 ** -k)
        expected.append(5 * 10.0 ** -(k + 1))
    expected = expected[:-1]
    assert len(grid) == 21
    assert grid == pytest.approx(expected, rel=1e-15)
    assert all(a > b for a, b in zip(grid, grid[1:]))
    assert grid[-1] == 1e-10 and 1e-6 in grid and 5e-2 in grid


def test_extended_tolerance_grid():
    grid = default_tolerance_grid(16)
    assert len(grid) == 33 and grid[-1] == 1e-16


def plan(graphs, alphas=(0.85,), tols=(1e-6,), norms=ALL, **kw):
    return SweepPlan([str(g) for g in graphs], list(alphas), list(tols), list(norms), repeats=1, **kw)


def test_norm_comparison_one_graph():
    recs = run_sweep(plan([FIXTURES / "web_small.mtx"]))
    assert len(recs) == 3
    its = {r.norm: r.iterations for r in recs}
    assert its["linf"] <= its["l2"] <= its["l1"]


def test_two_cycle_cells():
    recs = run_sweep(plan([FIXTURES / "two_cycle.mtx"], alphas=(0.5, 0.85, 1.0), tols=(1e-2, 1e-9)))
    assert len(recs) == 2 * 3 * 3
    assert all(r.iterations == 1 and r.err_vs_ref == 0 and r.converged for r in recs)


def test_star_damping_trend():
    recs = run_sweep(plan([FIXTURES / "star.mtx"], alphas=(0.75, 0.85, 0.95), norms=[NormKind.L1]))
    its = [r.iterations for r in sorted(recs, key=lambda r: r.alpha)]
    assert its == sorted(its)
    # conservation rules out the alpha-mode here; the surviving error mode decays as (2 alpha / 3)^k
    for r in recs:
        rate_est = math.log10(r.tolerance) / math.log10(2 * r.alpha / 3)
        assert rate_est / 2 <= r.iterations <= rate_est * 2


def test_reducible_graph_tracks_estimate(tmp_path):
    path = tmp_path / "web2k.mtx"
    write_matrix_market(scale_free(2000, seed=11), path)
    recs = run_sweep(plan([path], alphas=(0.75, 0.85, 0.95), norms=[NormKind.L1]))
    its = [r.iterations for r in sorted(recs, key=lambda r: r.alpha)]
    assert its == sorted(its)
    for r in recs:
        est = estimate_iterations(r.alpha, r.tolerance)
        assert est / 2 <= r.iterations <= est * 2


def test_record_count_and_sort_order():
    graphs = fixture_graphs()
    recs = run_sweep(plan(graphs, alphas=(0.6, 0.85), tols=(1e-2, 1e-4, 1e-6)))
    assert len(recs) == len(graphs) * 2 * 3 * 3
    assert recs == sorted(recs, key=SweepRecord.sort_key)
    assert [r.tolerance for r in recs[:3]] == [1e-2, 1e-4, 1e-6]


def test_repeats_average_time():
    recs = run_sweep(SweepPlan([str(FIXTURES / "star.mtx")], [0.85], [1e-6], [NormKind.L1], repeats=3))
    assert recs[0].time_ms >= 0


def test_determinism():
    p = plan(fixture_graphs(), alphas=(0.7, 0.9), tols=(1e-3, 1e-8))
    a, b = run_sweep(p), run_sweep(p)
    strip = lambda rs: [(r.graph, r.alpha, r.tolerance, r.norm, r.iterations, r.converged, r.err_vs_ref)
                        for r in rs]
    assert strip(a) == strip(b)


def test_threads_do_not_change_results():
    p = plan(fixture_graphs(), tols=(1e-4, 1e-8))
    one = run_sweep(p, threads=1)
    many = run_sweep(p, threads=4)
    assert [r.iterations for r in one] == [r.iterations for r in many]
    assert [r.err_vs_ref for r in one] == [r.err_vs_ref for r in many]


def test_thread_cap_env(monkeypatch):
    monkeypatch.setenv("PAGERANK_LAB_THREADS", "3")
    assert thread_cap() == 3
    monkeypatch.setenv("PAGERANK_LAB_THREADS", "zero")
    with pytest.raises(SweepError):
        thread_cap()
    monkeypatch.delenv("PAGERANK_LAB_THREADS")
    assert thread_cap() >= 1


def test_bad_graph_is_named(tmp_path):
    bad = tmp_path / "broken.mtx"
    bad.write_text("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n9 9\n")
    with pytest.raises(SweepError, match="broken.mtx"):
        run_sweep(plan([bad]))
    with pytest.raises(SweepError, match="nope.mtx"):
        run_sweep(plan([tmp_path / "nope.mtx"]))


def test_non_convergence_is_recorded():
    recs = run_sweep(plan([FIXTURES / "web_small.mtx"], tols=(1e-30,), norms=[NormKind.L1], max_iterations=5))
    assert recs[0].iterations == 5 and not recs[0].converged


def test_plan_validation():
    with pytest.raises(ValueError):
        SweepPlan([], [0.85], [1e-6], ALL)
    with pytest.raises(ValueError):
        SweepPlan(["g"], [1.2], [1e-6], ALL)
    with pytest.raises(ValueError):
        SweepPlan(["g"], [0.85], [0], ALL)
    assert SweepPlan(["g"], [0.85], [1e-6], ["l2"]).norms == [NormKind.L2]


def test_csv_round_trip(tmp_path):
    recs = run_sweep(plan([FIXTURES / "star.mtx"], tols=(0.1, 1e-7)))
    path = tmp_path / "out.csv"
    write_csv(recs, path)
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(CSV_HEADER)
    assert read_csv(path) == recs
    rows = list(csv.DictReader(io.StringIO(text)))
    assert {r["converged"] for r in rows} <= {"true", "false"}


def test_float_round_trip_precision():
    rec = SweepRecord("g", 3, 2, 0.1 + 0.2, 1e-6, "l1", 4, True, 1 / 3, 2 ** -50)
    row = next(csv.DictReader(io.StringIO(format_csv([rec]))))
    assert SweepRecord.from_row(row) == rec


def fake_series(graph, norm, its, grid, max_iter=500):
    return [SweepRecord(graph, 10, 20, 0.85, t, norm, i, i < max_iter, 1.0, 0.0) for t, i in zip(grid, its)]


def test_sensitivity_first_failing():
    grid = default_tolerance_grid()[:7]
    recs = fake_series("g", "l1", [5, 9, 14, 27, 63, 500, 500], grid)
    entry = detect_sensitivity(recs)[("g", "l1")]
    assert entry.first_failing_tolerance == grid[5]
    assert entry.failing_tolerances == grid[5:]
    assert entry.closure_violations == []


def test_sensitivity_all_converged():
    grid = default_tolerance_grid()[:4]
    entry = detect_sensitivity(fake_series("g", "l2", [3, 4, 5, 6], grid))[("g", "l2")]
    assert entry.first_failing_tolerance is None
    assert entry.single_iteration_tolerances == []


def test_sensitivity_single_iteration():
    grid = default_tolerance_grid()[:4]
    entry = detect_sensitivity(fake_series("g", "linf", [1, 1, 3, 7], grid))[("g", "linf")]
    assert entry.single_iteration_tolerances == grid[:2]


def test_sensitivity_closure_violation_reported():
    grid = default_tolerance_grid()[:5]
    entry = detect_sensitivity(fake_series("g", "l1", [4, 500, 30, 500, 500], grid))[("g", "l1")]
    assert entry.first_failing_tolerance == grid[3]
    assert entry.closure_violations == [grid[1]]


def test_sensitivity_grid_gap():
    grid = default_tolerance_grid()[:5]
    recs = fake_series("g", "l1", [1, 2, 3, 4, 5], grid) + fake_series("g", "l2", [1, 2, 3, 4], grid[:2] + grid[3:])
    with pytest.raises(ValueError, match="gaps"):
        detect_sensitivity(recs)
    with pytest.raises(ValueError, match="gaps"):
        detect_sensitivity(fake_series("g", "l1", [1, 2, 3, 4], grid[:4]), grid=grid)


def test_sensitivity_rejects_mixed_alphas():
    grid = default_tolerance_grid()[:2]
    recs = fake_series("g", "l1", [1, 2], grid)
    recs.append(SweepRecord("g", 10, 20, 0.5, 1e-3, "l1", 2, True, 1.0, 0.0))
    with pytest.raises(ValueError, match="damping"):
        detect_sensitivity(recs)


def test_tolerance_sweep_properties_on_fixtures():
    grid = default_tolerance_grid()
    recs = run_sweep(plan(fixture_graphs(), tols=grid))
    cells = {(r.graph, r.norm, r.tolerance): r for r in recs}
    graphs = {r.graph for r in recs}
    for g in graphs:
        for t in grid:
            assert cells[(g, "linf", t)].iterations <= cells[(g, "l2", t)].iterations <= cells[(g, "l1", t)].iterations
        for n in ("l1", "l2", "linf"):
            its = [cells[(g, n, t)].iterations for t in grid]
            assert its == sorted(its)
    report = detect_sensitivity(recs)
    assert all(not e.closure_violations for e in report.entries.values())


def test_single_precision_sensitivity_ordering():
    # float32 rank storage puts the rounding floor inside the default grid
    g = build_csr(scale_free(2000, seed=0))
    grid = default_tolerance_grid(12)
    recs = sweep_graph(g, "w", SweepPlan(["w"], [0.85], grid, ALL, repeats=1, precision="float32"))
    report = detect_sensitivity(recs)
    first = {n: report[("w", n)].first_failing_tolerance for n in ("l1", "l2", "linf")}
    assert None not in first.values()
    assert first["l1"] >= first["l2"] >= first["linf"]
    failing = {(r.norm, r.tolerance) for r in recs if not r.converged}
    assert failing == {(n, t) for n in first for t in grid if t <= first[n]}
    assert all(r.iterations == 500 for r in recs if not r.converged)
