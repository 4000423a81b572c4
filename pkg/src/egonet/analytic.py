"""Bounds and fixed-point solvers for giant-component and outbreak sizes.

Three levels of egocentric information are covered: mean degree only
(Erdos-Renyi), a degree distribution (configuration model) and a joint
single/triangle degree distribution (clustered configuration model).

Largest roots of the ``1 - t = ...`` equations are reached by iterating
from ``t = 1``, which decreases monotonically onto the largest fixed point.
Extinction-type systems (two-class eta system, clustered h/g system) are
iterated upward from zero onto their minimal solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .egodata import DegreeDistribution, JointDegreeDistribution

ZERO_SNAP = 1e-9
MONOTONE_SLACK = 1e-13


class ConvergenceError(RuntimeError):
    """A fixed-point iteration did not settle within ``max_iter`` steps."""


@dataclass(frozen=True)
class SolverSettings:
    tol: float = 1e-12
    max_iter: int = 1_000_000
    r_grid: int = 101
    p_grid: int = 20

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.r_grid < 2 or self.p_grid < 2:
            raise ValueError("grids need at least 2 points")


DEFAULT = SolverSettings()


@dataclass(frozen=True)
class EtaPair:
    eta2: float
    eta3: float


@dataclass(frozen=True)
class MillerSolution:
    g1: float
    h1: float
    gDelta: float
    hDelta: float
    tau: float
    empty: bool = False


def _snap(tau: float) -> float:
    return 0.0 if tau < ZERO_SNAP else min(float(tau), 1.0)


def _check_p(p: float) -> None:
    if not 0.0 < p <= 1.0:
        raise ValueError(f"transmission probability {p!r} outside (0, 1]")


def _iterate(step, x0, settings: SolverSettings, increasing: bool):
    """Run ``x <- step(x)`` to a fixed point, asserting monotone progress."""
    x = np.asarray(x0, dtype=float)
    for _ in range(settings.max_iter):
        nxt = np.asarray(step(x), dtype=float)
        diff = nxt - x
        if increasing and np.any(diff < -MONOTONE_SLACK):
            raise AssertionError(f"iteration not nondecreasing: {x} -> {nxt}")
        if not increasing and np.any(diff > MONOTONE_SLACK):
            raise AssertionError(f"iteration not nonincreasing: {x} -> {nxt}")
        x = nxt
        if np.max(np.abs(diff)) <= settings.tol:
            return x
    raise ConvergenceError(f"no convergence within {settings.max_iter} iterations")


# --------------------------------------------------------------------------
# extremal values


def tau_min_any_level() -> float:
    """Smallest attainable giant or outbreak fraction, at every data level.

    Tiling the population with small isolated groups always respects the
    observed local data, so the minimum is zero.
    """
    return 0.0


def tau_max_mean(mu: float) -> float:
    if not mu > 0:
        raise ValueError("mean degree must be positive")
    return 1.0 if mu >= 2 else mu / 2


def tau_max_degree(d: DegreeDistribution) -> float:
    """Largest giant fraction for a fixed degree distribution.

    Nodes of degree two or more are strung on a line and degree-one nodes
    hang off spare stubs.  When every node has degree at most one, all
    components have size at most two and the maximum is zero.
    """
    p0, p1 = d.p(0), d.p(1)
    low = p0 + p1
    if low >= 1.0 - 1e-15:
        return 0.0
    spare = (d.mean() - p1) / (1.0 - low) - 2.0
    if spare >= p1:
        val = 1.0 - p0
    else:
        val = 1.0 - low + spare
    return float(min(max(val, 1.0 - low), 1.0))


def tau_epi_max_mean(mu: float, p: float) -> float:
    """Largest outbreak fraction given only the mean degree (star-like network)."""
    if not mu > 0:
        raise ValueError("mean degree must be positive")
    _check_p(p)
    k = math.floor(mu / 2)
    alpha = mu / 2 - k
    return (1 - alpha) * (1 - (1 - p) ** k) + alpha * (1 - (1 - p) ** (k + 1))


# --------------------------------------------------------------------------
# Erdos-Renyi and configuration model


def solve_er_giant(mu: float, settings: SolverSettings = DEFAULT) -> float:
    """Largest root of ``1 - t = exp(-mu t)``; zero unless ``mu > 1``."""
    if not mu > 0:
        raise ValueError("mean degree must be positive")
    return solve_er_epidemic(mu, 1.0, settings)


def solve_er_epidemic(mu: float, p: float, settings: SolverSettings = DEFAULT) -> float:
    """Largest root of ``1 - t = exp(-p mu t)``; depends only on ``p*mu``."""
    if not mu > 0:
        raise ValueError("mean degree must be positive")
    _check_p(p)
    lam = p * mu
    if lam <= 1:
        return 0.0
    t = _iterate(lambda t: 1.0 - np.exp(-lam * t), 1.0, settings, increasing=False)
    return _snap(float(t))


def r_g(d: DegreeDistribution) -> float:
    """Mean excess degree ``mu + (sigma^2 - mu)/mu``; zero for an empty network."""
    mu = d.mean()
    if mu == 0:
        return 0.0
    return mu + (d.variance() - mu) / mu


def r0_config(d: DegreeDistribution, p: float) -> float:
    return p * r_g(d)


def _excess_pgf(d: DegreeDistribution):
    k = d.degrees.astype(float)
    w = d.degrees * d.probs
    pos = d.degrees > 0
    k, w = k[pos] - 1.0, w[pos] / w[pos].sum()

    def f(s):
        return float(np.dot(w, np.power(s, k)))
    return f


def config_fixed_point(d: DegreeDistribution, p: float,
                       settings: SolverSettings = DEFAULT) -> float:
    """Largest root ``t`` of ``1 - t = rho'(1 - p t) / rho'(1)``."""
    _check_p(p)
    if r0_config(d, p) <= 1:
        return 0.0
    g = _excess_pgf(d)
    t = _iterate(lambda t: 1.0 - g(1.0 - p * float(t)), 1.0, settings, increasing=False)
    return float(t)


def solve_config_giant(d: DegreeDistribution, settings: SolverSettings = DEFAULT) -> float:
    return solve_config_epidemic(d, 1.0, settings)


def solve_config_epidemic(d: DegreeDistribution, p: float,
                          settings: SolverSettings = DEFAULT) -> float:
    t = config_fixed_point(d, p, settings)
    if t == 0.0:
        return 0.0
    return _snap(1.0 - d.pgf(1.0 - p * t))


# --------------------------------------------------------------------------
# two-class (degrees 2 and 3) network with tunable assortativity


def solve_eta_system(p2: float, p3: float, r: float, p: float,
                     settings: SolverSettings = DEFAULT) -> EtaPair:
    """Minimal solution of the eta system for degrees 2 and 3.

    ``eta2``/``eta3`` are the probabilities that an infected node of degree
    2/3, reached along an edge, starts only a finite chain of infections.
    ``r`` is the probability a stub attaches within its own degree class.
    """
    if p2 < 0 or p3 < 0 or abs(p2 + p3 - 1) > 1e-9:
        raise ValueError("p2 and p3 must be a two-point distribution")
    if not 0 <= r <= 1:
        raise ValueError("r must lie in [0, 1]")
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")

    if r < 1 and two_class_r0(r, p) <= 1 + 1e-12:
        # irreducible and not supercritical: every chain dies out; iterating
        # would crawl towards (1, 1) at the critical point
        return EtaPair(1.0, 1.0)

    def step(x):
        e2, e3 = x
        return ((1 - p) + p * r * e2 + p * (1 - r) * e3,
                ((1 - p) + p * (1 - r) * e2 + p * r * e3) ** 2)

    e2, e3 = _iterate(step, (0.0, 0.0), settings, increasing=True)
    return EtaPair(float(e2), float(e3))


def two_class_r0(r: float, p: float) -> float:
    """Dominant eigenvalue of the mean-offspring matrix of the eta system.

    Rows are the degree-2 and degree-3 types reached along an edge; a
    degree-k node passes infection on along k-1 further edges.
    """
    a, b = p * r, p * (1 - r)
    m = np.array([[a, b], [2 * b, 2 * a]])
    return float(max(np.linalg.eigvals(m).real))


def outbreak_size_two_class(r: float, p: float, settings: SolverSettings = DEFAULT,
                            p2: float = 0.6) -> float:
    """Relative major-outbreak size on the 2/3-degree correlated network."""
    _check_p(p)
    if p <= 0.5:
        # even a 3-regular network is subcritical here
        return 0.0
    eta = solve_eta_system(p2, 1 - p2, r, p, settings)
    a = (1 - p) + p * r * eta.eta2 + p * (1 - r) * eta.eta3
    b = (1 - p) + p * (1 - r) * eta.eta2 + p * r * eta.eta3
    return _snap(1.0 - (p2 * a ** 2 + (1 - p2) * b ** 3))


def find_r_max(p: float, settings: SolverSettings = DEFAULT,
               p2: float = 0.6) -> tuple[float, float]:
    """Grid search for the assortativity ``r`` maximising the outbreak.

    Returns ``(nan, 0.0)`` when no ``r`` gives a major outbreak.  Ties go to
    the smaller ``r``.
    """
    _check_p(p)
    best_r, best_tau = math.nan, 0.0
    for r in np.linspace(0.0, 1.0, settings.r_grid):
        tau = outbreak_size_two_class(float(r), p, settings, p2)
        if tau > best_tau + 1e-12:
            best_r, best_tau = float(r), tau
    return best_r, best_tau


# --------------------------------------------------------------------------
# clustered (single + triangle) configuration model


def _triangle_g(p: float, h: float) -> float:
    return (1 - p + p * h) ** 2 - 2 * p * p * (1 - p) * h * (1 - h)


def solve_miller(j: JointDegreeDistribution, p: float,
                 settings: SolverSettings = DEFAULT) -> MillerSolution:
    """Outbreak size on a random network with given single/triangle degrees.

    ``g1``/``gDelta`` are the probabilities that a single edge / triangle of
    a random node fails to lead to the giant; ``h1``/``hDelta`` the same
    for a node reached along such an edge / triangle.  The h-g system is
    iterated upward from ``h1 = hDelta = 0``.
    """
    _check_p(p)
    k1, kt, w = j.k1.astype(float), j.kt.astype(float), j.probs
    e1, et = j.mean_single(), j.mean_triangle()
    if e1 == 0 and et == 0:
        return MillerSolution(1.0, 1.0, 1.0, 1.0, 0.0, empty=True)

    def gs(h):
        h1, ht = h
        g1 = 1 - p + p * h1 if e1 > 0 else 1.0
        gt = _triangle_g(p, ht) if et > 0 else 1.0
        return g1, gt

    def step(h):
        g1, gt = gs(h)
        pw1 = np.power(g1, k1)
        pwt = np.power(gt, kt)
        h1 = 1.0
        ht = 1.0
        if e1 > 0:
            m = k1 > 0
            h1 = np.dot(k1[m] * w[m], np.power(g1, k1[m] - 1) * pwt[m]) / e1
        if et > 0:
            m = kt > 0
            ht = np.dot(kt[m] * w[m], pw1[m] * np.power(gt, kt[m] - 1)) / et
        return h1, ht

    h0 = (0.0 if e1 > 0 else 1.0, 0.0 if et > 0 else 1.0)
    h1, ht = _iterate(step, h0, settings, increasing=True)
    g1, gt = gs((h1, ht))
    tau = 1.0 - float(np.dot(w, np.power(g1, k1) * np.power(gt, kt)))
    return MillerSolution(float(g1), float(h1), float(gt), float(ht), _snap(tau))


def giant_miller(j: JointDegreeDistribution, settings: SolverSettings = DEFAULT) -> float:
    return solve_miller(j, 1.0, settings).tau


def miller_matrix(j: JointDegreeDistribution, p: float) -> np.ndarray:
    """Mean offspring matrix over (single edge, triangle) types.

    Rows/columns whose type is absent (zero mean degree of that kind) are
    zero, so the dominant eigenvalue reduces to the surviving entry.
    """
    k1, kt = j.k1.astype(float), j.kt.astype(float)
    e1, et = j.mean_single(), j.mean_triangle()
    c = 2 * p * (1 + p - p * p)
    m = np.zeros((2, 2))
    if e1 > 0:
        m[0, 0] = p * j.expect(k1 * k1 - k1) / e1
    if et > 0:
        m[1, 1] = c * j.expect(kt * kt - kt) / et
    if e1 > 0 and et > 0:
        m[0, 1] = p * j.expect(k1 * kt) / et
        m[1, 0] = c * j.expect(k1 * kt) / e1
    return m


def r0_miller(j: JointDegreeDistribution, p: float) -> float:
    """Dominant eigenvalue of the 2x2 offspring matrix, in closed form."""
    _check_p(p)
    (a, b), (c, d) = miller_matrix(j, p)
    half_tr = (a + d) / 2
    disc = ((a - d) / 2) ** 2 + b * c
    return float(half_tr + math.sqrt(max(disc, 0.0)))


def solve_miller_assortative(j: JointDegreeDistribution, p: float,
                             settings: SolverSettings = DEFAULT) -> float:
    """Outbreak size when triangles only join nodes of the same class.

    Single edges still attach uniformly at random.  A triangle reached from
    a class-c node leads to two more class-c nodes, so each class carries
    its own triangle pair ``(gDelta_c, hDelta_c)``; the single-edge pair is
    shared.  With a single class this is exactly ``solve_miller``.
    """
    _check_p(p)
    k1, kt, w = j.k1.astype(float), j.kt.astype(float), j.probs
    e1 = j.mean_single()
    if e1 == 0 and j.mean_triangle() == 0:
        return 0.0
    has_t = kt > 0

    def gs(h):
        h1, ht = h[0], h[1:]
        g1 = 1 - p + p * h1 if e1 > 0 else 1.0
        gt = np.where(has_t, _triangle_g(p, ht), 1.0)
        return g1, gt

    def step(h):
        g1, gt = gs(h)
        pwt = np.power(gt, kt)
        h1 = 1.0
        if e1 > 0:
            m = k1 > 0
            h1 = np.dot(k1[m] * w[m], np.power(g1, k1[m] - 1) * pwt[m]) / e1
        ht = np.where(has_t, np.power(g1, k1) * np.power(gt, np.maximum(kt - 1, 0)), 1.0)
        return np.concatenate([[h1], ht])

    h0 = np.concatenate([[0.0 if e1 > 0 else 1.0], np.where(has_t, 0.0, 1.0)])
    h = _iterate(step, h0, settings, increasing=True)
    g1, gt = gs(h)
    return _snap(1.0 - float(np.dot(w, np.power(g1, k1) * np.power(gt, kt))))


# --------------------------------------------------------------------------
# summary across levels


@dataclass(frozen=True)
class Bounds:
    tau_min: float
    tau_max: float | None
    tau_rand: float
    threshold: float


def extremal_bounds(data, p: float = 1.0, settings: SolverSettings = DEFAULT) -> Bounds:
    """Min / max / random-network values for the given data level.

    ``data`` is a mean degree (float), a DegreeDistribution or a
    JointDegreeDistribution.  ``tau_max`` is None where no closed form is
    known (outbreaks with a degree distribution, and joint data).
    """
    _check_p(p)
    if isinstance(data, JointDegreeDistribution):
        sol = solve_miller(data, p, settings)
        return Bounds(tau_min_any_level(), None, sol.tau, r0_miller(data, p))
    if isinstance(data, DegreeDistribution):
        tmax = tau_max_degree(data) if p == 1 else None
        return Bounds(tau_min_any_level(), tmax, solve_config_epidemic(data, p, settings),
                      r0_config(data, p))
    mu = float(data)
    tmax = tau_max_mean(mu) if p == 1 else tau_epi_max_mean(mu, p)
    return Bounds(tau_min_any_level(), tmax, solve_er_epidemic(mu, p, settings), p * mu)
