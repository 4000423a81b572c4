"""``egonet`` command line: solve, generate, simulate, figure.

Output is CSV on stdout preceded by ``#`` provenance lines.  Exit codes:
0 success, 2 usage or infeasible parameters, 3 numerical or I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Sequence

from . import analytic as an
from . import generators as gen
from .egodata import (DegreeDistribution, JointDegreeDistribution,
                      negative_binomial_distribution, poisson_distribution,
                      read_distribution)
from .graph import Graph, read_edge_list, write_edge_list
from .percolation import estimate_outbreak
from .sweeps import FIGURES, SimCheck, SweepSpec, evaluate, figure, format_row, header

EXIT_USAGE = 2
EXIT_FAILURE = 3


class UsageError(Exception):
    pass


class FailureError(Exception):
    pass


def _emit(out, provenance: Sequence[str], cols: Sequence[str], rows) -> None:
    for line in provenance:
        out.write(f"# {line}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(cols)
    for row in rows:
        w.writerow(format_row(row))


def _provenance(args) -> list[str]:
    skip = {"func", "command"}
    params = " ".join(f"{k}={v}" for k, v in sorted(vars(args).items())
                      if k not in skip and v is not None)
    return [f"egonet {args.command}", params]


def _load_dist(path: str):
    try:
        return read_distribution(path)
    except OSError as exc:
        raise FailureError(f"cannot read {path}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _degree_dist(args) -> DegreeDistribution:
    try:
        if getattr(args, "poisson", None) is not None:
            return poisson_distribution(args.poisson)
        if getattr(args, "negbin", None) is not None:
            return negative_binomial_distribution(*args.negbin)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.dist is None:
        raise UsageError("a degree distribution is required (--dist, --poisson or --negbin)")
    d = _load_dist(args.dist)
    if not isinstance(d, DegreeDistribution):
        raise UsageError(f"{args.dist}: expected a two-column degree distribution")
    return d


def _joint_dist(args) -> JointDegreeDistribution:
    if args.dist is None:
        raise UsageError("--dist with a three-column joint distribution is required")
    d = _load_dist(args.dist)
    if not isinstance(d, JointDegreeDistribution):
        raise UsageError(f"{args.dist}: expected a three-column joint distribution")
    return d


def _parse_sweep(text: str) -> tuple[str, float, float, int]:
    try:
        name, start, stop, points = text.split(":")
        return name, float(start), float(stop), int(points)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected NAME:START:STOP:POINTS, got {text!r}") from None


# --------------------------------------------------------------------------
# solve

SOLVE_QUANTITIES = {
    "er-giant": "er_giant", "er-epi": "er_epi",
    "config-giant": "config_giant", "config-epi": "config_epi",
    "two-class": "two_class", "miller": "miller", "bounds": "extremal_bounds",
}


def cmd_solve(args, out) -> None:
    q = SOLVE_QUANTITIES[args.quantity]
    fixed: dict = {}
    if args.mu is not None:
        fixed["mu"] = args.mu
    if args.p is not None:
        fixed["p"] = args.p
    if args.r is not None:
        fixed["r"] = args.r
    if args.p2 is not None:
        fixed["p2"] = args.p2
    if q in ("config_giant", "config_epi"):
        fixed["dist"] = _degree_dist(args)
    elif q == "miller":
        fixed["dist"] = _joint_dist(args)
    elif q == "extremal_bounds" and (args.dist or args.poisson is not None
                                     or args.negbin is not None):
        d = _load_dist(args.dist) if args.dist else _degree_dist(args)
        fixed["dist"] = d

    axis = start = stop = None
    points = 2
    if args.sweep:
        axis, start, stop, points = args.sweep
        if axis not in ("mu", "p", "r"):
            raise UsageError(f"cannot sweep over {axis!r}; use mu, p or r")
    if q in ("er_giant", "er_epi") and "mu" not in fixed and axis != "mu":
        raise UsageError("--mu is required")
    if q == "extremal_bounds" and "dist" not in fixed and "mu" not in fixed and axis != "mu":
        raise UsageError("--mu or a distribution is required")
    if q in ("er_epi", "config_epi", "two_class") and "p" not in fixed and axis != "p":
        raise UsageError("--p is required")

    sim = SimCheck(args.sim_n, args.runs, args.seed) if args.sim_n else None
    try:
        spec = SweepSpec(q, axis, start if axis else 0.0, stop if axis else 1.0,
                         points, fixed, sim)
        settings = an.SolverSettings(tol=args.tol, max_iter=args.max_iter,
                                     r_grid=args.r_grid)
        rows = list(evaluate(spec, settings))
    except an.ConvergenceError as exc:
        raise FailureError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(out, _provenance(args), header(spec), rows)


# --------------------------------------------------------------------------
# generate

MODELS = ("clique-tiling", "line", "starlike", "configuration", "er", "two-class",
          "clustered", "fig5")
ALIASES = {"config": "configuration"}


def build_graph(args) -> tuple[Graph, object]:
    """Graph for ``args.model`` and the target distribution for auditing."""
    m = args.model
    need = {"clique-tiling": ["n", "mu"], "starlike": ["n", "mu"], "line": ["n"],
            "configuration": ["n"], "er": ["n"], "two-class": ["n", "r"],
            "clustered": ["n"], "fig5": ["n"]}[m]
    for name in need:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for {m}")
    n, seed = args.n, args.seed
    if m == "clique-tiling":
        return gen.gen_clique_tiling(n, args.mu), None
    if m == "starlike":
        return gen.gen_starlike(n, args.mu), None
    if m == "line":
        if args.mu is not None:
            return gen.gen_line_construction(n, args.mu), None
        d = _degree_dist(args)
        return gen.gen_line_construction(n, d), d
    if m == "configuration":
        d = _degree_dist(args)
        return gen.gen_configuration(n, d, seed), d
    if m == "er":
        if args.m is None and args.mu is None:
            raise UsageError("--m or --mu is required for er")
        edges = args.m if args.m is not None else round(n * args.mu / 2)
        return gen.gen_er_gnm(n, edges, seed), None
    if m == "two-class":
        p2 = 0.6 if args.p2 is None else args.p2
        return (gen.gen_two_class_correlated(n, p2, 1 - p2, args.r, seed),
                DegreeDistribution({2: p2, 3: 1 - p2}))
    if m == "clustered":
        j = _joint_dist(args)
        return gen.gen_clustered(n, j, args.assortative, seed), j.total_degree_distribution()
    return gen.gen_fig5_component_tiling(n), DegreeDistribution({4: 1.0})


def _build(args):
    try:
        return build_graph(args)
    except gen.InfeasibleError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_generate(args, out) -> None:
    g, target = _build(args)
    tv = gen.degree_tv_distance(g, target) if target is not None else None
    report = ["n", "m", "erased", "degree_tv"]
    values = [g.n, g.m, g.erased, tv]
    if args.out:
        try:
            with open(args.out, "w") as fh:
                write_edge_list(g, fh, _provenance(args))
        except OSError as exc:
            raise FailureError(f"cannot write {args.out}: {exc}") from None
        _emit(out, _provenance(args), report, [values])
    else:
        write_edge_list(g, out, _provenance(args))
        _emit(sys.stderr, [], report, [values])


# --------------------------------------------------------------------------
# simulate


def _analytic_tau(args, g: Graph):
    m, p = args.model, args.p
    if m == "er":
        return an.solve_er_epidemic(2 * g.m / g.n, p) if g.m else 0.0
    if m == "configuration":
        return an.solve_config_epidemic(_degree_dist(args), p)
    if m == "clustered":
        j = _joint_dist(args)
        if args.assortative:
            return an.solve_miller_assortative(j, p)
        return an.solve_miller(j, p).tau
    if m == "two-class":
        return an.outbreak_size_two_class(args.r, p, p2=0.6 if args.p2 is None else args.p2)
    if m == "starlike":
        return an.tau_epi_max_mean(args.mu, p)
    return None


def cmd_simulate(args, out) -> None:
    if args.graph:
        try:
            g = read_edge_list(args.graph)
        except (OSError, ValueError) as exc:
            raise FailureError(f"cannot load {args.graph}: {exc}") from None
        tau = None
        model = "file"
    elif args.model:
        g, _ = _build(args)
        tau = _analytic_tau(args, g)
        model = args.model
    else:
        raise UsageError("either --graph or --model is required")
    if not 0 < args.p <= 1:
        raise UsageError("--p must lie in (0, 1]")
    # outbreak randomness is keyed separately from graph construction
    est = estimate_outbreak(g, args.p, args.runs, args.threshold, seed=args.seed + 1)
    cols = ["model", "n", "m", "p", "runs", "threshold", "pi_hat", "pi_ci",
            "tau_hat", "tau_ci", "tau_analytic"]
    row = [model, g.n, g.m, est.p, est.runs, est.major_threshold, est.pi_hat, est.pi_ci,
           est.tau_hat, est.tau_ci, tau]
    _emit(out, _provenance(args), cols, [row])


# --------------------------------------------------------------------------
# figure


def cmd_figure(args, out) -> None:
    sim = SimCheck(args.sim_n, seed=args.seed) if args.sim_n else None
    settings = an.SolverSettings(p_grid=args.points) if args.points else an.DEFAULT
    try:
        cols, rows = figure(args.name, settings, sim)
    except an.ConvergenceError as exc:
        raise FailureError(str(exc)) from None
    _emit(out, _provenance(args), cols, rows)


# --------------------------------------------------------------------------


def _add_dist_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dist", help="distribution file: 'k p' or 'k1 kt p' rows")
    p.add_argument("--poisson", type=float, metavar="MU")
    p.add_argument("--negbin", type=float, nargs=2, metavar=("MU", "SIGMA2"))


def _model_name(text: str) -> str:
    return ALIASES.get(text, text)


def _add_model_flags(p: argparse.ArgumentParser, positional: bool) -> None:
    if positional:
        p.add_argument("model", type=_model_name, choices=MODELS)
    else:
        p.add_argument("--model", type=_model_name, choices=MODELS)
    p.add_argument("--n", type=int)
    p.add_argument("--mu", type=float)
    p.add_argument("--m", type=int, help="edge count for er")
    p.add_argument("--r", type=float, help="within-class attachment probability")
    p.add_argument("--p2", type=float, help="fraction of degree-2 nodes (default 0.6)")
    p.add_argument("--assortative", action="store_true",
                   help="clustered: triangles only within a class")
    p.add_argument("--seed", type=int, default=0)
    _add_dist_flags(p)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="egonet", allow_abbrev=False,
        description="Giant component and outbreak sizes from egocentric network data.")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", allow_abbrev=False, help="analytic values as CSV")
    s.add_argument("quantity", choices=sorted(SOLVE_QUANTITIES))
    s.add_argument("--mu", type=float)
    s.add_argument("--p", type=float)
    s.add_argument("--r", type=float)
    s.add_argument("--p2", type=float)
    _add_dist_flags(s)
    s.add_argument("--sweep", type=_parse_sweep, metavar="NAME:START:STOP:POINTS")
    s.add_argument("--tol", type=float, default=an.DEFAULT.tol)
    s.add_argument("--max-iter", type=int, default=an.DEFAULT.max_iter)
    s.add_argument("--r-grid", type=int, default=an.DEFAULT.r_grid)
    s.add_argument("--sim-n", type=int, help="also simulate on a generated graph")
    s.add_argument("--runs", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("generate", allow_abbrev=False, help="write an edge list")
    _add_model_flags(g, positional=True)
    g.add_argument("--out", help="edge-list path (default: stdout, report to stderr)")
    g.set_defaults(func=cmd_generate)

    m = sub.add_parser("simulate", allow_abbrev=False, help="Monte Carlo outbreaks")
    _add_model_flags(m, positional=False)
    m.add_argument("--graph", help="edge-list file to simulate on")
    m.add_argument("--p", type=float, default=1.0)
    m.add_argument("--runs", type=int, default=1000)
    m.add_argument("--threshold", type=int, help="major-outbreak size (default n^(2/3))")
    m.set_defaults(func=cmd_simulate)

    f = sub.add_parser("figure", allow_abbrev=False, help="data behind a figure")
    f.add_argument("name", choices=FIGURES)
    f.add_argument("--sim-n", type=int, help="fig6: add simulation columns at this n")
    f.add_argument("--points", type=int, help="fig6: number of p grid points")
    f.add_argument("--seed", type=int, default=0)
    f.set_defaults(func=cmd_figure)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except UsageError as exc:
        print(f"egonet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FailureError as exc:
        print(f"egonet: failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except an.ConvergenceError as exc:
        print(f"egonet: failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return 0


if __name__ == "__main__":
    sys.exit(main())
