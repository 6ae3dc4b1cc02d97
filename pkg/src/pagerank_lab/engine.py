"""Pull-based power-iteration PageRank over a :class:`CsrGraph`."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .graph import CsrGraph
from .norms import NormKind, error_norm

DEFAULT_MAX_ITERATIONS = 500
PRECISIONS = {"float64": np.float64, "float32": np.float32}

# settings of the baseline run that err_vs_ref is measured against
REFERENCE_ALPHA = 0.85
REFERENCE_TOLERANCE = 1e-6
REFERENCE_NORM = NormKind.L1


@dataclass(frozen=True)
class PageRankConfig:
    alpha: float = 0.85
    tolerance: float = 1e-6
    norm: NormKind = NormKind.L1
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    # rank storage; "float32" reproduces single-precision sensitivity but
    # cannot hold the sum of ranks to 1e-9
    precision: str = "float64"

    def __post_init__(self):
        if self.precision not in PRECISIONS:
            raise ValueError(f"precision must be one of {sorted(PRECISIONS)}, got {self.precision!r}")
        if not (0.0 <= self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not (self.tolerance > 0.0):
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not isinstance(self.norm, NormKind):
            object.__setattr__(self, "norm", NormKind.parse(str(self.norm)))


@dataclass(frozen=True)
class PageRankResult:
    ranks: np.ndarray
    iterations: int
    converged: bool
    elapsed_ms: float
    error: float


IterationHook = Callable[[int, np.ndarray], None]


def pagerank(g: CsrGraph, cfg: PageRankConfig = PageRankConfig(),
             on_iteration: Optional[IterationHook] = None) -> PageRankResult:
    """Run power iteration from the uniform vector until the error drops below tolerance.

    Each sweep computes every new rank from the previous vector only::

        c0      = (1 - alpha) / N + alpha * sum(prev[dangling]) / N
        new[v]  = c0 + alpha * sum(prev[u] / out_degree[u] for u in in(v))

    and stops once ``error_norm(new, prev) < tolerance`` or after
    ``max_iterations`` sweeps. ``on_iteration(k, new)`` is called after sweep
    ``k`` (1-based); it runs inside the timed region.
    """
    n = g.vertex_count
    if n < 1:
        raise ValueError("graph has no vertices")
    alpha = cfg.alpha
    dtype = PRECISIONS[cfg.precision]
    deg = g.out_degree.astype(dtype)
    has_out = g.out_degree > 0
    src = g.in_targets
    owner = g.in_owner
    dangling = g.dangling

    prev = np.full(n, 1.0 / n, dtype=dtype)
    contrib = np.zeros(n, dtype=dtype)
    err = math.inf
    iterations = 0

    start = time.perf_counter_ns()
    while True:
        c0 = (1.0 - alpha) / n + alpha * float(np.sum(prev[dangling])) / n
        np.divide(prev, deg, out=contrib, where=has_out)
        new = c0 + alpha * np.bincount(owner, weights=contrib[src], minlength=n)
        if dtype is not np.float64:
            new = new.astype(dtype)
        err = error_norm(cfg.norm, new, prev)
        iterations += 1
        if on_iteration is not None:
            on_iteration(iterations, new)
        prev = new
        if err < cfg.tolerance or iterations >= cfg.max_iterations:
            break
    elapsed = (time.perf_counter_ns() - start) / 1e6

    return PageRankResult(prev, iterations, err < cfg.tolerance, elapsed, err)


def reference_ranks(g: CsrGraph) -> np.ndarray:
    """Ranks from the default run (alpha 0.85, tolerance 1e-6, L1, 500 iterations)."""
    cfg = PageRankConfig(REFERENCE_ALPHA, REFERENCE_TOLERANCE, REFERENCE_NORM, DEFAULT_MAX_ITERATIONS)
    return pagerank(g, cfg).ranks


def reference_error(g: CsrGraph, ranks, reference: Optional[np.ndarray] = None) -> float:
    """L1 distance of ``ranks`` from the default-run ranks of ``g``.

    Pass ``reference`` to reuse a cached :func:`reference_ranks` vector.
    """
    if reference is None:
        reference = reference_ranks(g)
    return error_norm(NormKind.L1, ranks, reference)


def estimate_iterations(alpha: float, tolerance: float) -> int:
    """Rough iteration count ``log10(tolerance) / log10(alpha)``, rounded to nearest.

    >>> estimate_iterations(0.85, 1e-6)
    85
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not (0.0 < tolerance < 1.0):
        raise ValueError(f"tolerance must lie in (0, 1), got {tolerance}")
    k = math.log10(tolerance) / math.log10(alpha)
    return max(1, math.floor(k + 0.5))
