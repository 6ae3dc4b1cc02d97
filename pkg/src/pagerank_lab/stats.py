"""Means and composite relative-performance ratios across test cases.

Two families, three means each:

* ``ratio-am`` / ``ratio-gm`` / ``ratio-hm``: per-case ratio against the
  baseline first, then the mean of those ratios.
* ``am-ratio`` / ``gm-ratio`` / ``hm-ratio``: per-approach mean first, then
  the ratio of means. These do not depend on which approach is the baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

MEAN_KINDS = ("am", "gm", "hm")
METHODS = ("am-ratio", "gm-ratio", "hm-ratio", "ratio-am", "ratio-gm", "ratio-hm")


def mean(kind: str, xs) -> float:
    xs = [float(x) for x in np.asarray(xs, dtype=np.float64).ravel()]
    if not xs:
        raise ValueError("mean of an empty sequence")
    if any(not (x > 0) or math.isinf(x) for x in xs):
        raise ValueError("mean requires finite positive values")
    n = len(xs)
    kind = kind.lower()
    if kind == "am":
        return math.fsum(xs) / n
    if kind == "gm":
        # log-sum: products over many cases overflow
        return math.exp(math.fsum(math.log(x) for x in xs) / n)
    if kind == "hm":
        return n / math.fsum(1.0 / x for x in xs)
    raise ValueError(f"unknown mean kind {kind!r}")


@dataclass(frozen=True)
class MeasurementMatrix:
    """``values[i, j]`` is the measurement of approach ``i`` on case ``j``."""

    approaches: tuple
    cases: tuple
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "approaches", tuple(self.approaches))
        object.__setattr__(self, "cases", tuple(self.cases))
        if values.shape != (len(self.approaches), len(self.cases)):
            raise ValueError(f"values shape {values.shape} does not match "
                             f"{len(self.approaches)} approaches x {len(self.cases)} cases")
        if not self.approaches or not self.cases:
            raise ValueError("need at least one approach and one case")
        if len(set(self.approaches)) != len(self.approaches):
            raise ValueError("duplicate approach labels")
        if np.isnan(values).any():
            raise ValueError("measurement matrix has missing cells")
        if not (values > 0).all():
            raise ValueError("all measurements must be positive")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def row(self, approach) -> np.ndarray:
        return self.values[self._index(approach)]

    def _index(self, approach) -> int:
        try:
            return self.approaches.index(approach)
        except ValueError:
            raise KeyError(f"unknown baseline {approach!r}; approaches are {list(self.approaches)}") from None


@dataclass(frozen=True)
class RatioTable:
    method: str
    baseline: str
    ratios: dict
    # only the mean-then-ratio methods have per-approach means
    means: Optional[dict] = None


def _check_kind(kind: str) -> str:
    kind = kind.lower()
    if kind not in MEAN_KINDS:
        raise ValueError(f"unknown mean kind {kind!r}")
    return kind


def ratio_then_mean(m: MeasurementMatrix, baseline, kind: str) -> RatioTable:
    kind = _check_kind(kind)
    base = m.row(baseline)
    ratios = {}
    for a in m.approaches:
        ratios[a] = 1.0 if a == baseline else mean(kind, m.row(a) / base)
    return RatioTable(f"ratio-{kind}", baseline, ratios)


def mean_then_ratio(m: MeasurementMatrix, baseline, kind: str) -> RatioTable:
    kind = _check_kind(kind)
    m.row(baseline)
    means = {a: mean(kind, m.row(a)) for a in m.approaches}
    ratios = {a: means[a] / means[baseline] for a in m.approaches}
    return RatioTable(f"{kind}-ratio", baseline, ratios, means)


def ratio_table(m: MeasurementMatrix, baseline, method: str) -> RatioTable:
    """Dispatch on a method name such as ``gm-ratio`` or ``ratio-hm``."""
    method = method.lower()
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
    first, second = method.split("-")
    if first == "ratio":
        return ratio_then_mean(m, baseline, second)
    return mean_then_ratio(m, baseline, first)


def all_tables(m: MeasurementMatrix, baseline, methods: Sequence[str] = METHODS) -> list[RatioTable]:
    return [ratio_table(m, baseline, method) for method in methods]
