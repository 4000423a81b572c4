"""Explicit n-node graphs for the extremal constructions and the random
network models.

Random generators take an integer seed and are deterministic in it.  Stub
matchings may produce self-loops and repeated edges; these are erased and
the count is kept on ``Graph.erased``.
"""

from __future__ import annotations

import math

import numpy as np

from .egodata import DegreeDistribution, JointDegreeDistribution
from .graph import Graph

MAX_REPAIRS = 50


class InfeasibleError(ValueError):
    """Parameters admit no graph of the requested kind."""


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed))


def _clique_edges(nodes) -> list[tuple[int, int]]:
    nodes = list(nodes)
    return [(a, b) for i, a in enumerate(nodes) for b in nodes[i + 1:]]


def _pair_consecutive(stubs: np.ndarray) -> np.ndarray:
    return stubs.reshape(-1, 2)


# --------------------------------------------------------------------------
# extremal constructions


def gen_clique_tiling(n: int, mu: float) -> Graph:
    """Disjoint cliques of sizes floor(mu)+1 and ceil(mu)+1 with mean degree ~mu.

    Nodes left over after tiling form one smaller clique.
    """
    if not 1 <= mu <= n - 1:
        raise InfeasibleError(f"need 1 <= mu <= n-1, got mu={mu}, n={n}")
    lo, hi = math.floor(mu), math.ceil(mu)
    n_lo = 0
    if lo != hi:
        # choose the number of small cliques whose total degree is closest to n*mu
        best = None
        for a in range(n // (lo + 1) + 1):
            rest = n - a * (lo + 1)
            b, tail = divmod(rest, hi + 1)
            total = a * (lo + 1) * lo + b * (hi + 1) * hi + tail * max(tail - 1, 0)
            if best is None or abs(total - n * mu) < best[0]:
                best = (abs(total - n * mu), a * (lo + 1))
        n_lo = best[1]
    edges = []
    start = 0
    for size, span in ((lo + 1, n_lo), (hi + 1, n - n_lo)):
        for _ in range(span // size):
            edges += _clique_edges(range(start, start + size))
            start += size
    edges += _clique_edges(range(start, n))
    return Graph(n, edges)


def _apportion(n: int, d: DegreeDistribution) -> np.ndarray:
    """Deterministic degree sequence with counts round(n*p_k), largest remainder."""
    raw = n * d.probs
    counts = np.floor(raw).astype(np.int64)
    short = n - counts.sum()
    counts[np.argsort(-(raw - counts), kind="stable")[:short]] += 1
    return np.repeat(d.degrees, counts)


def gen_line_construction(n: int, data) -> Graph:
    """Giant-maximising construction: a path through every node of degree >= 2.

    ``data`` is a mean degree or a DegreeDistribution.  With a mean degree
    below 2, ``round(n*mu/2)`` path edges are used and the remaining nodes
    stay isolated; otherwise every node is on the path and extra edges are
    added as chords.  With a distribution, degree-1 nodes hang off spare
    stubs of path nodes and other spare stubs are paired greedily.
    """
    if isinstance(data, DegreeDistribution):
        if data.max_degree >= n:
            raise InfeasibleError("maximum degree must be below n")
        return _line_from_degrees(n, _apportion(n, data))
    mu = float(data)
    if not 0 < mu <= n - 1:
        raise InfeasibleError(f"need 0 < mu <= n-1, got {mu}")
    m = round(n * mu / 2)
    if m <= n - 1:
        return Graph(n, [(i, i + 1) for i in range(m)])
    edges = [(i, i + 1) for i in range(n - 1)]
    extra = m - (n - 1)
    gap = 2
    while extra > 0:
        if gap >= n:
            raise InfeasibleError("too many edges for a simple graph")
        take = min(extra, n - gap)
        edges += [(i, i + gap) for i in range(take)]
        extra -= take
        gap += 1
    return Graph(n, edges)


def _line_from_degrees(n: int, deg: np.ndarray) -> Graph:
    order = np.argsort(-deg, kind="stable")
    deg = deg[order]
    path = [i for i in range(n) if deg[i] >= 2]
    ones = [i for i in range(n) if deg[i] == 1]
    edges = {(path[i], path[i + 1]) for i in range(len(path) - 1)}
    spare = deg.copy()
    for i, v in enumerate(path):
        spare[v] -= (i > 0) + (i < len(path) - 1)

    # degree-1 nodes pendant on path nodes with spare stubs
    slots = [v for v in path for _ in range(spare[v])]
    hung = min(len(ones), len(slots))
    for leaf, v in zip(ones[:hung], slots[:hung]):
        edges.add((v, leaf))
        spare[v] -= 1
        spare[leaf] -= 1
    loose = ones[hung:]
    for a, b in zip(loose[0::2], loose[1::2]):
        edges.add((a, b))

    # leftover stubs of path nodes, paired greedily without repeats; the two
    # path ends are never joined so a degree-2 population stays a path
    ends = {(min(path[0], path[-1]), max(path[0], path[-1]))} if path else set()
    stubs = [v for v in path for _ in range(spare[v])]
    half = len(stubs) // 2
    for a, b in zip(stubs[:half], stubs[half:]):
        key = (min(a, b), max(a, b))
        if a != b and key not in edges and key not in ends:
            edges.add(key)
    return Graph(n, sorted(edges))


def gen_starlike(n: int, mu: float) -> Graph:
    """Hubs joined to everyone: floor(mu/2) hubs, plus one node joined to
    floor(alpha*n) non-hub nodes where alpha = mu/2 - floor(mu/2)."""
    if not 0 < mu < n:
        raise InfeasibleError(f"need 0 < mu < n, got mu={mu}, n={n}")
    k = math.floor(mu / 2)
    alpha = mu / 2 - k
    edges = [(h, v) for h in range(k) for v in range(h + 1, n)]
    reach = math.floor(alpha * n)
    if reach:
        if k + 1 + reach > n:
            raise InfeasibleError("fractional hub has too few partners")
        edges += [(k, v) for v in range(k + 1, k + 1 + reach)]
    return Graph(n, edges)


def gen_fig5_component_tiling(n: int) -> Graph:
    """Disjoint copies of a 9-node graph where every node has one triangle
    and two single edges.

    Three triangles {0,1,2}, {3,4,5}, {6,7,8} are threaded on the 9-cycle
    0-3-6-1-4-7-2-5-8-0, whose edges close no further triangles.
    """
    if n <= 0 or n % 9:
        raise InfeasibleError("n must be a positive multiple of 9")
    cycle = [0, 3, 6, 1, 4, 7, 2, 5, 8]
    unit = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (6, 7), (7, 8), (6, 8)]
    unit += [(cycle[i], cycle[(i + 1) % 9]) for i in range(9)]
    edges = [(a + 9 * c, b + 9 * c) for c in range(n // 9) for a, b in unit]
    return Graph(n, edges)


# --------------------------------------------------------------------------
# random models


def gen_er_gnm(n: int, m: int, seed: int = 0) -> Graph:
    """Uniform graph with exactly ``m`` distinct edges."""
    if m < 0 or m > n * (n - 1) // 2:
        raise InfeasibleError(f"cannot place {m} edges on {n} nodes")
    rng = _rng(seed)
    keys = np.empty(0, dtype=np.int64)
    while len(keys) < m:
        want = m - len(keys)
        draw = rng.integers(0, n, size=(int(want * 1.1) + 16, 2))
        u = np.minimum(draw[:, 0], draw[:, 1])
        v = np.maximum(draw[:, 0], draw[:, 1])
        new = (u * n + v)[u != v]
        # keep first occurrences in draw order
        allk = np.concatenate([keys, new])
        _, first = np.unique(allk, return_index=True)
        keys = allk[np.sort(first)][:m]
    return Graph(n, np.stack([keys // n, keys % n], axis=1))


def _sample(rng, support: np.ndarray, probs: np.ndarray, size: int) -> np.ndarray:
    return support[rng.choice(len(support), size=size, p=probs)]


def gen_configuration(n: int, d: DegreeDistribution, seed: int = 0) -> Graph:
    """Configuration model with i.i.d. degrees from ``d`` and erasure."""
    if d.max_degree >= n:
        raise InfeasibleError("maximum degree must be below n")
    rng = _rng(seed)
    deg = _sample(rng, d.degrees, d.probs, n)
    for _ in range(MAX_REPAIRS):
        if deg.sum() % 2 == 0:
            break
        i = rng.integers(n)
        deg[i] = _sample(rng, d.degrees, d.probs, 1)[0]
    else:
        # every support degree has the same odd parity and n is odd
        deg[np.argmax(deg)] -= 1
    stubs = rng.permutation(np.repeat(np.arange(n), deg))
    return Graph(n, _pair_consecutive(stubs))


def gen_two_class_correlated(n: int, p2: float, p3: float, r: float, seed: int = 0) -> Graph:
    """Degrees 2 and 3 where a stub attaches within its own class w.p. ``r``.

    Each class's stubs are split into a within-class pool and a cross pool.
    The cross pools must have equal size ``c``; ``c`` is the rounded average
    of ``(1-r)*S2`` and ``(1-r)*S3`` kept even so that both within pools
    pair up.
    """
    if p2 < 0 or p3 < 0 or abs(p2 + p3 - 1) > 1e-9:
        raise ValueError("p2 and p3 must be a two-point distribution")
    if not 0 <= r <= 1:
        raise ValueError("r must lie in [0, 1]")
    if n < 4:
        raise InfeasibleError("n too small for two degree classes")
    rng = _rng(seed)
    deg = np.where(rng.random(n) < p2, 2, 3)
    threes = np.flatnonzero(deg == 3)
    if len(threes) % 2:
        deg[threes[-1]] = 2
    s2 = np.repeat(np.flatnonzero(deg == 2), 2)
    s3 = np.repeat(np.flatnonzero(deg == 3), 3)
    c = (1 - r) * (len(s2) + len(s3)) / 2
    c = min(2 * round(c / 2), len(s2), len(s3))
    c -= c % 2
    s2 = rng.permutation(s2)
    s3 = rng.permutation(s3)
    cross = np.stack([s2[:c], s3[:c]], axis=1)
    edges = np.concatenate([cross, _pair_consecutive(s2[c:]), _pair_consecutive(s3[c:])])
    return Graph(n, edges)


def _repair_counts(rng, classes, probs, idx, n, ok, max_tries=MAX_REPAIRS):
    """Resample single nodes until ``ok(idx)`` holds."""
    for _ in range(max_tries):
        if ok(idx):
            return True
        idx[rng.integers(n)] = rng.choice(len(classes), p=probs)
    return ok(idx)


def gen_clustered(n: int, j: JointDegreeDistribution, assortative: bool = False,
                  seed: int = 0) -> Graph:
    """Clustered configuration model with single edges and triangles.

    Nodes draw i.i.d. ``(k1, kt)`` classes.  Single stubs are paired
    uniformly.  Triangle stubs are grouped into triples, uniformly when
    ``assortative`` is false, otherwise only among nodes of the same class.
    Totals that do not divide are repaired by resampling a few nodes, or
    failing that by dropping stubs from at most two nodes.
    """
    k1s, kts = j.k1, j.kt
    if (k1s + 2 * kts).max() >= n:
        raise InfeasibleError("maximum total degree must be below n")
    rng = _rng(seed)
    idx = rng.choice(len(j.probs), size=n, p=j.probs)

    def ok(ix):
        return k1s[ix].sum() % 2 == 0 and (assortative or kts[ix].sum() % 3 == 0)

    _repair_counts(rng, j.classes, j.probs, idx, n, ok)
    k1 = k1s[idx].copy()
    kt = kts[idx].copy()
    if k1.sum() % 2:
        k1[np.argmax(k1)] -= 1

    single = rng.permutation(np.repeat(np.arange(n), k1))
    edges = [_pair_consecutive(single)]

    if assortative:
        groups = [np.flatnonzero(idx == c) for c in range(len(j.probs)) if kts[c] > 0]
    else:
        groups = [np.arange(n)]
    for members in groups:
        t = kt[members]
        total = t.sum()
        if assortative and 0 < total < 3:
            raise InfeasibleError("a degree class is too small to form a triangle")
        # drop one stub from up to two nodes to reach a multiple of 3
        for _ in range(total % 3):
            t[np.argmax(t)] -= 1
        stubs = rng.permutation(np.repeat(members, t)).reshape(-1, 3)
        edges += [stubs[:, [0, 1]], stubs[:, [1, 2]], stubs[:, [0, 2]]]
    return Graph(n, np.concatenate(edges) if edges else None)


def degree_tv_distance(g: Graph, d: DegreeDistribution) -> float:
    """Total-variation distance between ``g``'s degree histogram and ``d``."""
    emp = g.degree_counts()
    target = d.masses
    keys = set(emp) | set(target)
    return 0.5 * sum(abs(emp.get(k, 0) / g.n - target.get(k, 0.0)) for k in keys)
