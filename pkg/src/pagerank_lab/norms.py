"""Error functions used as the convergence check between successive rank vectors."""

from __future__ import annotations

import enum

import numpy as np


class NormKind(enum.Enum):
    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @classmethod
    def parse(cls, token: str) -> "NormKind":
        try:
            return cls(token.strip().lower())
        except ValueError:
            raise ValueError(f"unknown norm {token!r}; expected one of l1, l2, linf") from None

    def __str__(self) -> str:
        return self.value


def _sequential_sum(x: np.ndarray) -> float:
    # cumsum adds strictly left to right (vertex id ascending), unlike np.sum's pairwise tree
    if x.size == 0:
        return 0.0
    return float(np.cumsum(x, dtype=np.longdouble)[-1])


def error_norm(kind: NormKind, r, s) -> float:
    """Unnormalised L1 / L2 / L-infinity distance between ``r`` and ``s``."""
    r = np.asarray(r, dtype=np.float64)
    s = np.asarray(s, dtype=np.float64)
    if r.shape != s.shape or r.ndim != 1:
        raise ValueError(f"rank vectors must be 1-d and equal length, got {r.shape} and {s.shape}")
    if r.size == 0:
        raise ValueError("rank vectors must be non-empty")
    d = np.abs(r - s)
    if kind is NormKind.L1:
        return _sequential_sum(d)
    if kind is NormKind.L2:
        d = d.astype(np.longdouble)
        return float(np.sqrt(np.cumsum(d * d)[-1]))
    if kind is NormKind.LINF:
        return float(d.max())
    raise TypeError(f"not a NormKind: {kind!r}")
