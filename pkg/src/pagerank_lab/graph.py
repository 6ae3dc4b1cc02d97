"""MatrixMarket ingestion and the reverse-CSR (in-edge) graph layout.

Entries are read as directed edges ``row -> col`` (1-based in the file,
0-based here). Weights are parsed for validity and dropped.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Union

import numpy as np

FIELDS = ("pattern", "real", "integer")
SYMMETRIES = ("general", "symmetric")


class MatrixMarketError(ValueError):
    """Malformed MatrixMarket input; ``lineno`` is 1-based."""

    def __init__(self, lineno: int, message: str, path: str | None = None):
        where = f"{path}: line {lineno}" if path else f"line {lineno}"
        super().__init__(f"{where}: {message}")
        self.lineno = lineno
        self.message = message
        self.path = path


@dataclass(frozen=True)
class EdgeList:
    vertex_count: int
    sources: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be positive")
        src = np.asarray(self.sources, dtype=np.int64)
        dst = np.asarray(self.targets, dtype=np.int64)
        if src.shape != dst.shape or src.ndim != 1:
            raise ValueError("sources and targets must be 1-d arrays of equal length")
        n = self.vertex_count
        if src.size and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise ValueError(f"edge endpoint outside [0, {n})")
        object.__setattr__(self, "sources", src)
        object.__setattr__(self, "targets", dst)

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Iterable[tuple[int, int]]) -> "EdgeList":
        pairs = list(pairs)
        src = np.array([p[0] for p in pairs], dtype=np.int64)
        dst = np.array([p[1] for p in pairs], dtype=np.int64)
        return cls(vertex_count, src, dst)

    def __len__(self) -> int:
        return int(self.sources.size)

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.sources.tolist(), self.targets.tolist()))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CsrGraph:
    """Directed graph stored by in-edges.

    ``in_targets[in_offsets[v]:in_offsets[v + 1]]`` are the sources of the
    edges pointing at ``v``, in ascending order. All arrays are read-only.
    """

    vertex_count: int
    in_offsets: np.ndarray
    in_targets: np.ndarray
    out_degree: np.ndarray
    dangling: np.ndarray
    # destination vertex of each in_targets slot, for vectorised pulls
    in_owner: np.ndarray = field(repr=False)

    @property
    def edge_count(self) -> int:
        return int(self.in_targets.size)

    def in_neighbors(self, v: int) -> np.ndarray:
        return self.in_targets[self.in_offsets[v]:self.in_offsets[v + 1]]

    def in_edges(self) -> Iterator[tuple[int, int]]:
        """Yield ``(u, v)`` for every stored edge ``u -> v``."""
        yield from zip(self.in_targets.tolist(), self.in_owner.tolist())


def build_csr(el: EdgeList) -> CsrGraph:
    n = el.vertex_count
    # key sorts by destination first, then source; np.unique also drops duplicates
    keys = np.unique(el.targets * n + el.sources)
    dst = keys // n
    src = keys - dst * n

    in_counts = np.bincount(dst, minlength=n)
    in_offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(in_counts, out=in_offsets[1:])
    out_degree = np.bincount(src, minlength=n).astype(np.int64)
    dangling = np.flatnonzero(out_degree == 0).astype(np.int64)

    return CsrGraph(
        vertex_count=n,
        in_offsets=_frozen(in_offsets),
        in_targets=_frozen(src.astype(np.int64)),
        out_degree=_frozen(out_degree),
        dangling=_frozen(dangling),
        in_owner=_frozen(dst.astype(np.int64)),
    )


Source = Union[bytes, str, IO[bytes], IO[str], Iterable[Union[bytes, str]]]


def _lines(source: Source) -> Iterator[str]:
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    elif isinstance(source, str):
        source = io.StringIO(source)
    for raw in source:
        if isinstance(raw, bytes):
            raw = raw.decode("ascii", errors="replace")
        yield raw.rstrip("\r\n")


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise MatrixMarketError(lineno, f"{what} is not an integer: {token!r}") from None


def parse_matrix_market(source: Source) -> EdgeList:
    """Parse a coordinate MatrixMarket matrix into directed edges.

    ``symmetric`` files contribute both directions for every off-diagonal
    entry. The vertex count is ``max(rows, cols)``.
    """
    lines = enumerate(_lines(source), start=1)

    try:
        lineno, banner = next(lines)
    except StopIteration:
        raise MatrixMarketError(1, "empty input") from None
    parts = banner.split()
    if len(parts) != 5 or parts[0].lower() != "%%matrixmarket" or parts[1].lower() != "matrix":
        raise MatrixMarketError(lineno, f"malformed banner: {banner!r}")
    fmt, fld, sym = (p.lower() for p in parts[2:])
    if fmt != "coordinate":
        raise MatrixMarketError(lineno, f"unsupported format {fmt!r}; only 'coordinate' is read")
    if fld not in FIELDS:
        raise MatrixMarketError(lineno, f"unsupported field {fld!r}")
    if sym not in SYMMETRIES:
        raise MatrixMarketError(lineno, f"unsupported symmetry {sym!r}")

    size = None
    for lineno, line in lines:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        tokens = s.split()
        if len(tokens) != 3:
            raise MatrixMarketError(lineno, f"size line needs 3 integers, got {s!r}")
        size = [_parse_int(t, lineno, "size") for t in tokens]
        break
    if size is None:
        raise MatrixMarketError(lineno + 1, "missing size line")
    rows, cols, nnz = size
    if rows < 1 or cols < 1 or nnz < 0:
        raise MatrixMarketError(lineno, f"invalid size line {rows} {cols} {nnz}")
    n = max(rows, cols)

    width = 2 if fld == "pattern" else 3
    src = np.empty(nnz, dtype=np.int64)
    dst = np.empty(nnz, dtype=np.int64)
    k = 0
    for lineno, line in lines:
        s = line.strip()
        if not s or s.startswith("%"):
            continue
        tokens = s.split()
        if len(tokens) != width:
            raise MatrixMarketError(lineno, f"expected {width} fields for {fld!r} entry, got {s!r}")
        if k >= nnz:
            raise MatrixMarketError(lineno, f"more entries than the declared {nnz}")
        i = _parse_int(tokens[0], lineno, "row index")
        j = _parse_int(tokens[1], lineno, "column index")
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise MatrixMarketError(lineno, f"index ({i}, {j}) outside {rows}x{cols}")
        if width == 3:
            try:
                int(tokens[2]) if fld == "integer" else float(tokens[2])
            except ValueError:
                raise MatrixMarketError(lineno, f"bad {fld} value {tokens[2]!r}") from None
        src[k] = i - 1
        dst[k] = j - 1
        k += 1
    if k != nnz:
        raise MatrixMarketError(lineno + 1, f"expected {nnz} entries, found {k}")

    if sym == "symmetric":
        off = src != dst
        src, dst = np.concatenate([src, dst[off]]), np.concatenate([dst, src[off]])
    return EdgeList(n, src, dst)


def load_graph(path: Union[str, os.PathLike]) -> CsrGraph:
    """Read a ``.mtx`` file; parse errors are re-raised naming the file."""
    with open(path, "rb") as f:
        try:
            el = parse_matrix_market(f)
        except MatrixMarketError as e:
            raise MatrixMarketError(e.lineno, e.message, os.fspath(path)) from None
    return build_csr(el)
