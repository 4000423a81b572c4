"""Simple undirected graphs in compressed sparse row form."""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np


class Graph:
    """Immutable simple undirected graph on nodes ``0..n-1``.

    Edges are stored once as ``(u, v)`` with ``u < v``, sorted
    lexicographically.  ``indptr``/``indices`` give the sorted neighbour
    lists; ``edge_ids[j]`` is the id of the edge behind ``indices[j]``.

    ``erased`` counts the self-loops and duplicate edges dropped while
    building the graph from a raw edge array.
    """

    def __init__(self, n: int, edges=None, *, erased: int = 0):
        n = int(n)
        if n < 0:
            raise ValueError("node count must be non-negative")
        if edges is None:
            edges = np.empty((0, 2), dtype=np.int64)
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise ValueError("edge endpoint out of range")

        raw = len(edges)
        u = np.minimum(edges[:, 0], edges[:, 1])
        v = np.maximum(edges[:, 0], edges[:, 1])
        keep = u != v
        keys = np.unique(u[keep] * n + v[keep])
        u, v = keys // n, keys % n

        self.n = n
        self.edges = np.stack([u, v], axis=1)
        self.erased = int(erased) + raw - len(keys)

        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        eid = np.concatenate([np.arange(len(u)), np.arange(len(u))])
        order = np.lexsort((dst, src))
        self.indices = dst[order]
        self.edge_ids = eid[order]
        self.indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=self.indptr[1:])

        for arr in (self.edges, self.indices, self.edge_ids, self.indptr):
            arr.flags.writeable = False

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @property
    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(i).tolist() for i in range(self.n)]

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        k = np.searchsorted(nb, j)
        return bool(k < len(nb) and nb[k] == j)

    def subgraph_edges(self, mask) -> Graph:
        """Same node set, keeping only edges where ``mask`` is true."""
        return Graph(self.n, self.edges[np.asarray(mask, dtype=bool)])

    def degree_counts(self) -> Counter:
        return Counter(self.degrees().tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, erased={self.erased})"


def write_edge_list(g: Graph, out: TextIO, comments: Iterable[str] = ()) -> None:
    """Write ``g`` as one ``u v`` pair per line with ``#`` comment lines.

    An ``# n=<count>`` line is always emitted so isolated nodes survive a
    round trip.
    """
    for c in comments:
        out.write(f"# {c}\n")
    out.write(f"# n={g.n}\n")
    for u, v in g.edges.tolist():
        out.write(f"{u} {v}\n")


def read_edge_list(path: str | Path | TextIO) -> Graph:
    if isinstance(path, (str, Path)):
        with open(path) as fh:
            return read_edge_list(fh)
    n = None
    pairs = []
    for lineno, line in enumerate(path, 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n="):
                n = int(body[2:])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    edges = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    if n is None:
        n = int(edges.max()) + 1 if len(edges) else 0
    return Graph(n, edges)
