"""Seeded synthetic graphs for tests, fixtures and desk-scale experiments."""

from __future__ import annotations

import os
from typing import Union

import numpy as np

from .graph import EdgeList


def circulant(n: int, k: int = 3) -> EdgeList:
    """``k``-regular (in and out) dangling-free digraph: ``v -> v+1, ..., v+k mod n``."""
    if not (1 <= k < n):
        raise ValueError("need 1 <= k < n")
    v = np.arange(n, dtype=np.int64)
    src = np.repeat(v, k)
    dst = (src + np.tile(np.arange(1, k + 1), n)) % n
    return EdgeList(n, src, dst)


def random_digraph(n: int, p: float, rng: np.random.Generator, dangling_fraction: float = 0.0) -> EdgeList:
    """Erdos-Renyi digraph; a ``dangling_fraction`` of vertices lose all out-edges."""
    adj = rng.random((n, n)) < p
    if dangling_fraction > 0:
        k = max(1, int(round(dangling_fraction * n)))
        adj[rng.choice(n, size=k, replace=False)] = False
    src, dst = np.nonzero(adj)
    return EdgeList(n, src, dst)


def scale_free(n: int, m: int = 4, seed: int = 0, dangling_fraction: float = 0.1,
               reciprocity: float = 0.3, sink_fraction: float = 0.05) -> EdgeList:
    """Web-like digraph with a heavy-tailed in-degree distribution.

    Vertex ``t`` links to ``m`` earlier vertices picked by preferential
    attachment on in-degree; a ``reciprocity`` share of those links is also
    returned, so the graph has cycles. A ``dangling_fraction`` of vertices
    keeps no out-links at all, and a ``sink_fraction`` of vertices is rewired
    into small closed cycles (reachable, but with no way out). The closed
    cycles make the link matrix reducible, as real web crawls are, which pins
    the power-iteration convergence rate at ``alpha``.
    """
    rng = np.random.default_rng(seed)
    m0 = m + 1
    src: list[int] = []
    dst: list[int] = []
    # attachment pool: each vertex once, plus once per in-edge received
    pool: list[int] = list(range(m0))
    for t in range(m0):
        for u in range(m0):
            if u != t:
                src.append(t)
                dst.append(u)
                pool.append(u)
    for t in range(m0, n):
        picks = set()
        while len(picks) < m:
            picks.add(pool[rng.integers(len(pool))])
        for u in sorted(picks):
            src.append(t)
            dst.append(u)
            pool.append(u)
            if rng.random() < reciprocity:
                src.append(u)
                dst.append(t)
        pool.append(t)
    src_a = np.array(src, dtype=np.int64)
    dst_a = np.array(dst, dtype=np.int64)
    order = rng.permutation(np.arange(m0, n))
    n_dead = int(round(dangling_fraction * n))
    n_sink = int(round(sink_fraction * n))
    dead, sinks = order[:n_dead], order[n_dead:n_dead + n_sink]
    keep = ~np.isin(src_a, np.concatenate([dead, sinks]))
    src_a, dst_a = src_a[keep], dst_a[keep]
    cyc_src, cyc_dst = [], []
    i = 0
    while i < sinks.size:
        length = min(int(rng.integers(2, 6)), sinks.size - i)
        members = sinks[i:i + length]
        if length == 1:
            cyc_src.append(members[0])
            cyc_dst.append(members[0])
        else:
            cyc_src.extend(members)
            cyc_dst.extend(np.roll(members, -1))
        i += length
    src_a = np.concatenate([src_a, np.array(cyc_src, dtype=np.int64)])
    dst_a = np.concatenate([dst_a, np.array(cyc_dst, dtype=np.int64)])
    return EdgeList(n, src_a, dst_a)


def write_matrix_market(el: EdgeList, path: Union[str, os.PathLike], comment: str = "") -> None:
    """Write ``el`` as a ``pattern general`` coordinate file."""
    with open(path, "w") as f:
        f.write("%%MatrixMarket matrix coordinate pattern general\n")
        for line in comment.splitlines():
            f.write(f"% {line}\n")
        f.write(f"{el.vertex_count} {el.vertex_count} {len(el)}\n")
        for u, v in el.pairs():
            f.write(f"{u + 1} {v + 1}\n")
