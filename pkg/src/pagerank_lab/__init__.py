"""Pull-based PageRank parameter study: damping, tolerance and convergence norm."""

from .engine import (
    PageRankConfig,
    PageRankResult,
    estimate_iterations,
    pagerank,
    reference_error,
    reference_ranks,
)
from .graph import CsrGraph, EdgeList, MatrixMarketError, build_csr, load_graph, parse_matrix_market
from .norms import NormKind, error_norm
from .stats import MeasurementMatrix, RatioTable, mean, mean_then_ratio, ratio_table, ratio_then_mean

__all__ = [
    "CsrGraph",
    "EdgeList",
    "MatrixMarketError",
    "MeasurementMatrix",
    "NormKind",
    "PageRankConfig",
    "PageRankResult",
    "RatioTable",
    "build_csr",
    "error_norm",
    "estimate_iterations",
    "load_graph",
    "mean",
    "mean_then_ratio",
    "pagerank",
    "parse_matrix_market",
    "ratio_table",
    "ratio_then_mean",
    "reference_error",
    "reference_ranks",
]
