"""Parameter sweeps behind the solve and figure commands."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import analytic as an
from . import generators as gen
from .egodata import (DegreeDistribution, JointDegreeDistribution,
                      negative_binomial_distribution)
from .percolation import OutbreakEstimate, estimate_outbreak, major_fraction, percolate

QUANTITIES = ("er_giant", "er_epi", "config_giant", "config_epi", "two_class",
              "miller", "extremal_bounds")


@dataclass(frozen=True)
class SimCheck:
    n: int
    runs: int = 1000
    seed: int = 0


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    axis: str | None = None
    start: float = 0.0
    stop: float = 1.0
    points: int = 2
    fixed: dict = field(default_factory=dict)
    sim: SimCheck | None = None

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}")
        if self.axis is not None:
            if not self.start < self.stop:
                raise ValueError("sweep start must be below stop")
            if self.points < 2:
                raise ValueError("sweep needs at least 2 points")

    def grid(self) -> list[dict]:
        if self.axis is None:
            return [dict(self.fixed)]
        return [{**self.fixed, self.axis: float(v)}
                for v in np.linspace(self.start, self.stop, self.points)]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "" if math.isnan(x) else repr(round(x, 12))
    return str(x)


def format_row(values) -> list[str]:
    return [_fmt(v) for v in values]


HEADERS = {
    "er_giant": ["mu", "tau_min", "tau_max", "tau_rand", "threshold"],
    "er_epi": ["mu", "p", "tau_min", "tau_max", "tau_rand", "threshold"],
    "config_giant": ["mu", "variance", "tau_min", "tau_max", "tau_rand", "threshold"],
    "config_epi": ["mu", "variance", "p", "tau_min", "tau_rand", "threshold"],
    "two_class": ["p", "r", "tau", "r_max", "tau_max"],
    "miller": ["p", "tau", "g1", "h1", "gDelta", "hDelta", "threshold"],
    "extremal_bounds": ["p", "tau_min", "tau_max", "tau_rand", "threshold"],
}


def header(spec: SweepSpec) -> list[str]:
    cols = list(HEADERS[spec.quantity])
    if spec.sim is not None:
        cols += ["sim_n", "sim_runs", "sim_pi", "sim_tau"]
    return cols


def evaluate(spec: SweepSpec, settings: an.SolverSettings = an.DEFAULT):
    """Yield one row of values per grid point."""
    for point in spec.grid():
        row = _analytic_row(spec.quantity, point, settings)
        if spec.sim is not None:
            est = simulate_point(spec.quantity, point, spec.sim)
            row += [spec.sim.n, spec.sim.runs, est.pi_hat, est.tau_hat if est.has_major else 0.0]
        yield row


def _analytic_row(q: str, pt: dict, settings) -> list:
    p = pt.get("p", 1.0)
    if q == "er_giant":
        mu = pt["mu"]
        return [mu, 0.0, an.tau_max_mean(mu), an.solve_er_giant(mu, settings), mu]
    if q == "er_epi":
        mu = pt["mu"]
        return [mu, p, 0.0, an.tau_epi_max_mean(mu, p),
                an.solve_er_epidemic(mu, p, settings), p * mu]
    if q == "config_giant":
        d = pt["dist"]
        return [d.mean(), d.variance(), 0.0, an.tau_max_degree(d),
                an.solve_config_giant(d, settings), an.r_g(d)]
    if q == "config_epi":
        d = pt["dist"]
        return [d.mean(), d.variance(), p, 0.0,
                an.solve_config_epidemic(d, p, settings), an.r0_config(d, p)]
    if q == "two_class":
        r = pt.get("r")
        p2 = pt.get("p2", 0.6)
        if r is None:
            r_max, tau_max = an.find_r_max(p, settings, p2)
            return [p, None, None, r_max, tau_max]
        return [p, r, an.outbreak_size_two_class(r, p, settings, p2), None, None]
    if q == "miller":
        sol = an.solve_miller(pt["dist"], p, settings)
        return [p, sol.tau, sol.g1, sol.h1, sol.gDelta, sol.hDelta,
                an.r0_miller(pt["dist"], p)]
    b = an.extremal_bounds(pt.get("dist", pt.get("mu")), p, settings)
    return [p, b.tau_min, b.tau_max, b.tau_rand, b.threshold]


def simulate_point(q: str, pt: dict, sim: SimCheck) -> OutbreakEstimate:
    """Monte Carlo outbreaks on a graph generated from the point's model."""
    n, seed = sim.n, sim.seed
    p = pt.get("p", 1.0)
    if q in ("er_giant", "er_epi"):
        g = gen.gen_er_gnm(n, round(n * pt["mu"] / 2), seed)
    elif q in ("config_giant", "config_epi"):
        g = gen.gen_configuration(n, pt["dist"], seed)
    elif q == "two_class":
        p2 = pt.get("p2", 0.6)
        r = pt.get("r")
        if r is None:
            r = an.find_r_max(p)[0]
            if math.isnan(r):
                r = 0.0
        g = gen.gen_two_class_correlated(n, p2, 1 - p2, r, seed)
    elif q == "miller":
        g = gen.gen_clustered(n, pt["dist"], False, seed)
    else:
        data = pt.get("dist", pt.get("mu"))
        if isinstance(data, JointDegreeDistribution):
            g = gen.gen_clustered(n, data, False, seed)
        elif isinstance(data, DegreeDistribution):
            g = gen.gen_configuration(n, data, seed)
        else:
            g = gen.gen_er_gnm(n, round(n * data / 2), seed)
    return estimate_outbreak(g, p, sim.runs, seed=seed + 1)


# --------------------------------------------------------------------------
# figures

FIGURES = ("fig2", "fig3a", "fig3b", "fig3c", "fig3d", "fig4", "fig6")

FIG6_DIST = {(0, 1): 0.5, (2, 1): 0.5}


def _negbin_row(mu: float, sigma2: float, settings) -> list:
    d = negative_binomial_distribution(mu, sigma2)
    return [mu, sigma2, an.r_g(d), an.solve_config_giant(d, settings)]


def figure(name: str, settings: an.SolverSettings = an.DEFAULT,
           sim: SimCheck | None = None) -> tuple[list[str], list[list]]:
    """Header and rows of the data sweep behind a figure."""
    if name == "fig2":
        rows = []
        for mu in np.linspace(0.0, 4.0, 81):
            rows.append([float(mu), an.solve_er_giant(mu, settings) if mu > 0 else 0.0])
        return ["mu", "tau_rand"], rows
    nb_cols = ["mu", "variance", "r_g", "tau_rand"]
    if name == "fig3a":
        return nb_cols, [_negbin_row(float(mu), 2.0, settings)
                         for mu in np.linspace(0.1, 1.9, 37)]
    if name == "fig3b":
        # R_G = 2 fixes the variance at mu*(3 - mu)
        return nb_cols, [_negbin_row(float(mu), float(mu * (3 - mu)), settings)
                         for mu in np.linspace(0.1, 1.9, 37)]
    if name == "fig3c":
        # with mu = 1 the variance equals R_G
        return nb_cols, [_negbin_row(1.0, float(rg), settings)
                         for rg in np.linspace(1.05, 5.0, 80)]
    if name == "fig3d":
        return nb_cols, [_negbin_row(1.0, float(s2), settings)
                         for s2 in np.linspace(1.1, 10.0, 90)]
    if name == "fig4":
        rows = []
        for p in np.linspace(0.01, 1.0, 100):
            r_max, tau = an.find_r_max(float(p), settings)
            rows.append([float(p), r_max, tau])
        return ["p", "r_max", "tau_max"], rows
    if name == "fig6":
        j = JointDegreeDistribution(FIG6_DIST)
        cols = ["p", "tau_random", "tau_assortative"]
        if sim is not None:
            cols += ["sim_random", "sim_assortative"]
            graphs = [gen.gen_clustered(sim.n, j, a, sim.seed) for a in (False, True)]
        rows = []
        for p in np.linspace(0.05, 1.0, settings.p_grid):
            p = float(p)
            row = [p, an.solve_miller(j, p, settings).tau,
                   an.solve_miller_assortative(j, p, settings)]
            if sim is not None:
                row += [major_fraction(percolate(g, p, sim.seed + 1)) for g in graphs]
            rows.append(row)
        return cols, rows
    raise ValueError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
