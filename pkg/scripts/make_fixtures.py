#!/usr/bin/env python3
"""Regenerate the synthetic test fixture tests/fixtures/web_small.mtx."""

from pathlib import Path

from pagerank_lab.synthetic import scale_free, write_matrix_market

out = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "web_small.mtx"
write_matrix_market(scale_free(200, seed=7), out, "synthetic web-like digraph: scale_free(200, seed=7)")
print(out)
