"""Egocentric network data: degree distributions, joint single/triangle
degree distributions, ego-record ingestion and generating functions."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence, TextIO

import numpy as np
from scipy import stats

SUM_TOL = 1e-9


def _normalize(masses: Mapping, key_ok) -> dict:
    out = {}
    for key, prob in masses.items():
        if not key_ok(key):
            raise ValueError(f"invalid support point {key!r}")
        if isinstance(prob, Fraction):
            if prob < 0:
                raise ValueError(f"negative probability at {key!r}")
        else:
            prob = float(prob)
            if not np.isfinite(prob) or prob < 0:
                raise ValueError(f"negative or non-finite probability at {key!r}")
        if prob > 0:
            out[key] = out.get(key, 0) + prob
    total = sum(out.values())
    if not out:
        raise ValueError("distribution has no mass")
    if abs(float(total) - 1.0) > SUM_TOL:
        raise ValueError(f"probabilities sum to {float(total)!r}, not 1")
    # exact rationals normalize exactly; floats get a final division
    return {k: float(p / total) for k, p in sorted(out.items())}


def _is_degree(k) -> bool:
    return isinstance(k, (int, np.integer)) and k >= 0


class DegreeDistribution:
    """Finite-support pmf over non-negative integer degrees."""

    def __init__(self, masses: Mapping[int, float]):
        clean = _normalize({int(k) if _is_degree(k) else k: p for k, p in masses.items()},
                           _is_degree)
        self.degrees = np.fromiter(clean.keys(), dtype=np.int64)
        self.probs = np.fromiter(clean.values(), dtype=float)
        self.degrees.flags.writeable = False
        self.probs.flags.writeable = False

    @classmethod
    def point_mass(cls, k: int) -> DegreeDistribution:
        return cls({k: 1.0})

    @property
    def masses(self) -> dict[int, float]:
        return dict(zip(self.degrees.tolist(), self.probs.tolist()))

    @property
    def max_degree(self) -> int:
        return int(self.degrees[-1])

    def p(self, k: int) -> float:
        return self.masses.get(k, 0.0)

    def mean(self) -> float:
        return float(np.dot(self.degrees, self.probs))

    def variance(self) -> float:
        mu = self.mean()
        return max(float(np.dot(self.degrees.astype(float) ** 2, self.probs)) - mu * mu, 0.0)

    def pgf(self, s: float) -> float:
        _check_unit(s)
        return float(np.dot(self.probs, np.power(float(s), self.degrees)))

    def pgf_derivative(self, s: float) -> float:
        _check_unit(s)
        k = self.degrees
        pos = k > 0
        return float(np.dot(k[pos] * self.probs[pos], np.power(float(s), k[pos] - 1)))

    def __eq__(self, other):
        if not isinstance(other, DegreeDistribution):
            return NotImplemented
        return (np.array_equal(self.degrees, other.degrees)
                and np.allclose(self.probs, other.probs, rtol=0, atol=1e-15))

    def __repr__(self) -> str:
        return f"DegreeDistribution({self.masses})"


class JointDegreeDistribution:
    """Finite-support pmf over (single degree, triangle degree) pairs.

    An ego of class ``(k1, kt)`` has ``k1`` neighbours unconnected to any
    other neighbour and ``kt`` triangles, for a total degree ``k1 + 2*kt``.
    """

    def __init__(self, masses: Mapping[tuple[int, int], float]):
        def ok(key):
            return (isinstance(key, tuple) and len(key) == 2
                    and all(_is_degree(x) for x in key))
        clean = _normalize({tuple(int(x) for x in k) if ok(k) else k: p
                            for k, p in masses.items()}, ok)
        keys = np.array(list(clean.keys()), dtype=np.int64).reshape(-1, 2)
        self.k1 = keys[:, 0].copy()
        self.kt = keys[:, 1].copy()
        self.probs = np.fromiter(clean.values(), dtype=float)
        for arr in (self.k1, self.kt, self.probs):
            arr.flags.writeable = False

    @property
    def masses(self) -> dict[tuple[int, int], float]:
        return {(a, b): p for a, b, p in
                zip(self.k1.tolist(), self.kt.tolist(), self.probs.tolist())}

    @property
    def classes(self) -> list[tuple[int, int]]:
        return list(zip(self.k1.tolist(), self.kt.tolist()))

    def expect(self, values) -> float:
        return float(np.dot(self.probs, values))

    def mean_single(self) -> float:
        return self.expect(self.k1)

    def mean_triangle(self) -> float:
        return self.expect(self.kt)

    def total_degree_distribution(self) -> DegreeDistribution:
        acc: dict[int, float] = {}
        for k, p in zip((self.k1 + 2 * self.kt).tolist(), self.probs.tolist()):
            acc[k] = acc.get(k, 0.0) + p
        return DegreeDistribution(acc)

    def __repr__(self) -> str:
        return f"JointDegreeDistribution({self.masses})"


def _check_unit(s: float) -> None:
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"generating function argument {s!r} outside [0, 1]")


def mean_degree(d: DegreeDistribution) -> float:
    return d.mean()


def variance_degree(d: DegreeDistribution) -> float:
    return d.variance()


def pgf(d: DegreeDistribution, s: float) -> float:
    return d.pgf(s)


def pgf_derivative(d: DegreeDistribution, s: float) -> float:
    return d.pgf_derivative(s)


def _truncated(dist, tail_eps: float) -> DegreeDistribution:
    if not 0 < tail_eps < 1:
        raise ValueError("tail_eps must lie in (0, 1)")
    # smallest K with P(D > K) <= tail_eps
    hi = max(int(dist.mean() + 10 * np.sqrt(dist.var())) + 10, 16)
    while dist.sf(hi) > tail_eps:
        hi *= 2
    ks = np.arange(hi + 1)
    K = int(np.argmax(dist.sf(ks) <= tail_eps))
    ks = ks[:K + 1]
    pmf = dist.pmf(ks)
    return DegreeDistribution({int(k): p / pmf.sum() for k, p in zip(ks, pmf) if p > 0})


def poisson_distribution(mu: float, tail_eps: float = 1e-12) -> DegreeDistribution:
    if mu < 0 or not np.isfinite(mu):
        raise ValueError("Poisson mean must be non-negative and finite")
    if mu == 0:
        return DegreeDistribution.point_mass(0)
    return _truncated(stats.poisson(mu), tail_eps)


def negative_binomial_distribution(mu: float, sigma2: float,
                                   tail_eps: float = 1e-12) -> DegreeDistribution:
    """Negative binomial degree law with mean ``mu`` and variance ``sigma2``.

    Requires over-dispersion; a variance within relative 1e-12 of the mean
    is rejected as numerically indistinguishable from the Poisson limit.
    """
    if mu <= 0 or not np.isfinite(mu) or not np.isfinite(sigma2):
        raise ValueError("mean must be positive and finite")
    if sigma2 - mu <= 1e-12 * max(1.0, mu):
        raise ValueError("negative binomial needs variance strictly above the mean")
    q = mu / sigma2
    shape = mu * mu / (sigma2 - mu)
    return _truncated(stats.nbinom(shape, q), tail_eps)


# --------------------------------------------------------------------------
# ego records


@dataclass(frozen=True)
class EgoRecord:
    ego: str
    alters: tuple[str, ...]
    pairs: tuple[tuple[str, str], ...] | None = None

    def __post_init__(self):
        if len(set(self.alters)) != len(self.alters):
            raise ValueError(f"ego {self.ego}: duplicate alter ids")
        if self.ego in self.alters:
            raise ValueError(f"ego {self.ego}: lists itself as an alter")
        if self.pairs is not None:
            known = set(self.alters)
            for a, b in self.pairs:
                if a == b or a not in known or b not in known:
                    raise ValueError(f"ego {self.ego}: bad alter pair ({a}, {b})")


class IngestError(ValueError):
    """An ego record cannot be reduced to single/triangle degrees."""


def single_triangle_degree(rec: EgoRecord) -> tuple[int, int]:
    """Reduce one record to ``(k1, kt)``.

    Alters joined by pairs must form complete groups; a group of ``s``
    mutually connected alters adds ``s*(s-1)/2`` triangles.  Any other
    alter-alter pattern (e.g. an open path a-b-c) raises IngestError.
    """
    pairs = {frozenset(p) for p in (rec.pairs or ())}
    adj: dict[str, set[str]] = {a: set() for a in rec.alters}
    for p in pairs:
        a, b = tuple(p)
        adj[a].add(b)
        adj[b].add(a)
    seen: set[str] = set()
    for a in rec.alters:
        if a in seen or not adj[a]:
            continue
        group = {a}
        stack = [a]
        while stack:
            x = stack.pop()
            for y in adj[x] - group:
                group.add(y)
                stack.append(y)
        seen |= group
        if any(len(adj[x]) != len(group) - 1 for x in group):
            raise IngestError(
                f"ego {rec.ego}: alters {sorted(group)} are connected but not fully")
    in_pairs = sum(1 for a in rec.alters if adj[a])
    return len(rec.alters) - in_pairs, len(pairs)


def ingest_ego_records(records: Iterable[EgoRecord], mode: str = "ego_only",
                       on_invalid: str = "raise"):
    """Empirical distribution from ego records.

    ``mode`` is ``"ego_only"`` (returns DegreeDistribution over alter
    counts) or ``"alter_connections"`` (returns JointDegreeDistribution).
    With ``on_invalid="skip"`` records that cannot be reduced are dropped.
    """
    if mode not in ("ego_only", "alter_connections"):
        raise ValueError(f"unknown ingestion mode {mode!r}")
    if on_invalid not in ("raise", "skip"):
        raise ValueError(f"unknown on_invalid policy {on_invalid!r}")
    counts: Counter = Counter()
    for rec in records:
        if mode == "ego_only":
            counts[len(rec.alters)] += 1
            continue
        try:
            counts[single_triangle_degree(rec)] += 1
        except IngestError:
            if on_invalid == "raise":
                raise
    total = sum(counts.values())
    if total == 0:
        raise ValueError("no usable ego records")
    masses = {k: Fraction(c, total) for k, c in counts.items()}
    if mode == "ego_only":
        return DegreeDistribution(masses)
    return JointDegreeDistribution(masses)


def ego_records_from_graph(g, nodes: Sequence[int] | None = None) -> list[EgoRecord]:
    """Ego records (with alter pairs) read off an explicit graph."""
    out = []
    for i in (range(g.n) if nodes is None else nodes):
        nb = g.neighbors(i).tolist()
        pairs = tuple((str(a), str(b)) for a, b in combinations(nb, 2) if g.has_edge(a, b))
        out.append(EgoRecord(str(i), tuple(str(a) for a in nb), pairs))
    return out


# --------------------------------------------------------------------------
# text formats


def _data_lines(fh: TextIO):
    for lineno, line in enumerate(fh, 1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def read_ego_records(path: str | Path | TextIO) -> list[EgoRecord]:
    """Parse the whitespace ego-record format.

    Each line: ``ego_id alter_count alter_1 ... alter_k [a-b ...]`` where
    the optional trailing tokens are alter pairs joined by ``-``.
    """
    if isinstance(path, (str, Path)):
        with open(path) as fh:
            return read_ego_records(fh)
    out = []
    for lineno, tok in _data_lines(path):
        try:
            k = int(tok[1])
        except (IndexError, ValueError):
            raise ValueError(f"line {lineno}: missing alter count") from None
        if k < 0 or len(tok) < 2 + k:
            raise ValueError(f"line {lineno}: expected {k} alter ids")
        alters = tuple(tok[2:2 + k])
        rest = tok[2 + k:]
        pairs = []
        for t in rest:
            a, sep, b = t.partition("-")
            if not sep or not a or not b:
                raise ValueError(f"line {lineno}: malformed pair {t!r}")
            pairs.append((a, b))
        try:
            out.append(EgoRecord(tok[0], alters, tuple(pairs) if rest else None))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return out


def write_ego_records(records: Iterable[EgoRecord], out: TextIO) -> None:
    for rec in records:
        fields = [rec.ego, str(len(rec.alters)), *rec.alters]
        fields += [f"{a}-{b}" for a, b in rec.pairs or ()]
        out.write(" ".join(fields) + "\n")


def read_distribution(path: str | Path | TextIO):
    """Read a two-column ``k p`` or three-column ``k1 kt p`` file."""
    if isinstance(path, (str, Path)):
        with open(path) as fh:
            return read_distribution(fh)
    rows = list(_data_lines(path))
    if not rows:
        raise ValueError("empty distribution file")
    width = len(rows[0][1])
    if width not in (2, 3) or any(len(t) != width for _, t in rows):
        raise ValueError("distribution rows must all have 2 or all have 3 columns")
    if width == 2:
        acc: dict = {}
        for _, (k, p) in rows:
            acc[int(k)] = acc.get(int(k), 0.0) + float(p)
        return DegreeDistribution(acc)
    acc = {}
    for _, (a, b, p) in rows:
        acc[(int(a), int(b))] = acc.get((int(a), int(b)), 0.0) + float(p)
    return JointDegreeDistribution(acc)


def write_distribution(d, out: TextIO) -> None:
    if isinstance(d, DegreeDistribution):
        out.write("# k p\n")
        for k, p in d.masses.items():
            out.write(f"{k} {p!r}\n")
    else:
        out.write("# k1 kt p\n")
        for (a, b), p in d.masses.items():
            out.write(f"{a} {b} {p!r}\n")
