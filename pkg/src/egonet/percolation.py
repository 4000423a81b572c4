"""Bond percolation and Reed-Frost outbreaks on explicit graphs.

Randomness is counter based: the coin of edge ``e`` in a run keyed by
``key`` is ``uniform(key, e) < p``.  Each edge therefore has exactly one
coin per run however often it is reached, runs with the same key are
coupled across ``p`` (kept edge sets are nested), and ``percolate`` with a
seed keeps precisely the edges that ``run_outbreak`` with that seed would
find open.
"""

from __future__ import annotations

import math
import os
import warnings
from collections import Counter
from dataclasses import dataclass
from itertools import product

import numba
import numpy as np
from numba import njit, prange

from .graph import Graph

warnings.filterwarnings("ignore", message="The TBB threading layer")

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INDEX_SALT = np.uint64(0xD1B54A32D192ED03)
_U53 = 1.0 / 9007199254740992.0
_MASK64 = (1 << 64) - 1


@njit(cache=True, inline="always")
def _mix(x):
    x = x + _GOLDEN
    x = (x ^ (x >> np.uint64(30))) * _M1
    x = (x ^ (x >> np.uint64(27))) * _M2
    return x ^ (x >> np.uint64(31))


@njit(cache=True, inline="always")
def _uniform(key, e):
    return np.float64(_mix(key ^ _mix(np.uint64(e))) >> np.uint64(11)) * _U53


@njit(cache=True, inline="always")
def _index_case(key, n):
    return np.int64(_mix(key ^ _INDEX_SALT) % np.uint64(n))


@njit(cache=True)
def _run_key(seed, r):
    return _mix(_mix(seed) + np.uint64(r))


@njit(cache=True)
def _outbreak(indptr, indices, edge_ids, n, p, key, seen, queue):
    src = _index_case(key, n)
    seen[src] = True
    queue[0] = src
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        for j in range(indptr[u], indptr[u + 1]):
            v = indices[j]
            if seen[v]:
                continue
            if _uniform(key, edge_ids[j]) < p:
                seen[v] = True
                queue[tail] = v
                tail += 1
    for i in range(tail):
        seen[queue[i]] = False
    return tail


@njit(cache=True, parallel=True)
def _many_outbreaks(indptr, indices, edge_ids, n, p, seed, runs):
    sizes = np.empty(runs, dtype=np.int64)
    for r in prange(runs):
        seen = np.zeros(n, dtype=np.bool_)
        queue = np.empty(n, dtype=np.int64)
        sizes[r] = _outbreak(indptr, indices, edge_ids, n, p, _run_key(seed, r), seen, queue)
    return sizes


@njit(cache=True)
def _keep_mask(m, p, key):
    out = np.empty(m, dtype=np.bool_)
    for e in range(m):
        out[e] = _uniform(key, e) < p
    return out


@njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True)
def _union_find_labels(n, us, vs):
    parent = np.arange(n)
    size = np.ones(n, dtype=np.int64)
    for e in range(us.shape[0]):
        a = _find(parent, us[e])
        b = _find(parent, vs[e])
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
    for i in range(n):
        parent[i] = _find(parent, i)
    return parent


def _as_u64(seed: int) -> np.uint64:
    return np.uint64(int(seed) & _MASK64)


def _seed_key(seed: int) -> np.uint64:
    # numba hands uint64 results back as Python ints; retag before reuse
    return np.uint64(_run_key(_as_u64(seed), np.uint64(0)))


def _configure_threads() -> None:
    cap = os.environ.get("EGONET_THREADS")
    if cap:
        numba.set_num_threads(max(1, min(int(cap), numba.config.NUMBA_NUM_THREADS)))


# --------------------------------------------------------------------------


def percolate(g: Graph, p: float, seed: int = 0) -> Graph:
    """Keep each edge independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    key = _seed_key(seed)
    return g.subgraph_edges(_keep_mask(g.m, float(p), key))


def component_labels(g: Graph) -> np.ndarray:
    """Root label of every node, from disjoint-set union over the edges."""
    if g.n == 0:
        return np.empty(0, dtype=np.int64)
    return _union_find_labels(g.n, g.edges[:, 0].copy(), g.edges[:, 1].copy())


def components(g: Graph) -> list[int]:
    """Component sizes, largest first."""
    if g.n == 0:
        return []
    sizes = np.bincount(component_labels(g))
    return sorted(sizes[sizes > 0].tolist(), reverse=True)


def giant_fraction(g: Graph) -> float:
    return components(g)[0] / g.n if g.n else 0.0


def major_fraction(g: Graph, threshold: int | None = None) -> float:
    """Fraction of nodes lying in components of at least ``threshold`` nodes.

    On a percolated graph this is the exact probability, over the index
    case, that an outbreak is classified major.
    """
    if g.n == 0:
        return 0.0
    threshold = default_threshold(g.n) if threshold is None else threshold
    sizes = np.asarray(components(g))
    return float(sizes[sizes >= threshold].sum()) / g.n


def default_threshold(n: int) -> int:
    return max(1, math.ceil(n ** (2 / 3)))


def run_outbreak(g: Graph, p: float, seed: int = 0) -> int:
    """Final size of one outbreak from a uniformly random index case."""
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if g.n == 0:
        raise ValueError("graph has no nodes")
    key = _seed_key(seed)
    seen = np.zeros(g.n, dtype=np.bool_)
    queue = np.empty(g.n, dtype=np.int64)
    return int(_outbreak(g.indptr, g.indices, g.edge_ids, g.n, float(p), key, seen, queue))


def outbreak_sizes(g: Graph, p: float, runs: int, seed: int = 0) -> np.ndarray:
    """Final sizes of ``runs`` independent outbreaks.

    Run ``r`` is keyed by ``(seed, r)`` alone, so the result does not depend
    on thread count or scheduling.
    """
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1]")
    if runs < 1:
        raise ValueError("runs must be at least 1")
    if g.n == 0:
        raise ValueError("graph has no nodes")
    _configure_threads()
    return _many_outbreaks(g.indptr, g.indices, g.edge_ids, g.n, float(p),
                           _as_u64(seed), int(runs))


@dataclass(frozen=True)
class OutbreakEstimate:
    runs: int
    major_threshold: int
    pi_hat: float
    pi_ci: float
    tau_hat: float | None
    tau_ci: float | None
    p: float
    n: int

    @property
    def has_major(self) -> bool:
        return self.tau_hat is not None


def estimate_outbreak(g: Graph, p: float, runs: int = 1000,
                      major_threshold: int | None = None, seed: int = 0) -> OutbreakEstimate:
    """Monte Carlo estimate of the major-outbreak probability and size.

    Runs reaching at least ``major_threshold`` nodes (default n^(2/3)) are
    major.  Half-widths are 95% normal-approximation intervals.
    """
    thr = default_threshold(g.n) if major_threshold is None else int(major_threshold)
    sizes = outbreak_sizes(g, p, runs, seed)
    major = sizes >= thr
    k = int(major.sum())
    pi_hat = k / runs
    pi_ci = 1.96 * math.sqrt(pi_hat * (1 - pi_hat) / runs)
    tau_hat = tau_ci = None
    if k:
        rel = sizes[major] / g.n
        tau_hat = float(rel.mean())
        tau_ci = float(1.96 * rel.std(ddof=1) / math.sqrt(k)) if k > 1 else 0.0
    return OutbreakEstimate(runs, thr, pi_hat, pi_ci, tau_hat, tau_ci, float(p), g.n)


# --------------------------------------------------------------------------


MAX_ORACLE_EDGES = 12


def exact_small_outbreak_oracle(g: Graph, p: float) -> dict[int, dict[int, float]]:
    """Exact outbreak-size distribution per index case, by enumeration.

    Every one of the ``2**m`` keep/drop patterns is visited with its
    probability; component membership is found with a plain set-based
    search that shares nothing with the production code paths.
    """
    if g.m > MAX_ORACLE_EDGES:
        raise ValueError(f"enumeration limited to {MAX_ORACLE_EDGES} edges, got {g.m}")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    edges = [tuple(e) for e in g.edges.tolist()]
    dist: dict[int, Counter] = {i: Counter() for i in range(g.n)}
    for pattern in product((False, True), repeat=len(edges)):
        kept = [e for e, on in zip(edges, pattern) if on]
        weight = p ** len(kept) * (1 - p) ** (len(edges) - len(kept))
        if weight == 0:
            continue
        nbrs: dict[int, set] = {i: set() for i in range(g.n)}
        for a, b in kept:
            nbrs[a].add(b)
            nbrs[b].add(a)
        for i in range(g.n):
            reach = {i}
            stack = [i]
            while stack:
                for y in nbrs[stack.pop()] - reach:
                    reach.add(y)
                    stack.append(y)
            dist[i][len(reach)] += weight
    return {i: dict(c) for i, c in dist.items()}


def exact_index_size_distribution(g: Graph, p: float) -> dict[int, float]:
    """Size distribution with the index case drawn uniformly."""
    per_node = exact_small_outbreak_oracle(g, p)
    out: Counter = Counter()
    for d in per_node.values():
        for s, w in d.items():
            out[s] += w / g.n
    return dict(out)
