"""Giant-component and epidemic-outbreak sizes consistent with egocentric
network data, with explicit-graph Monte Carlo validation."""

from .analytic import (ConvergenceError, EtaPair, MillerSolution, SolverSettings,
                       extremal_bounds, find_r_max, giant_miller, outbreak_size_two_class,
                       r0_config, r0_miller, r_g, solve_config_epidemic, solve_config_giant,
                       solve_er_epidemic, solve_er_giant, solve_eta_system, solve_miller,
                       solve_miller_assortative, tau_epi_max_mean, tau_max_degree,
                       tau_max_mean, tau_min_any_level, two_class_r0)
from .egodata import (DegreeDistribution, EgoRecord, JointDegreeDistribution,
                      ingest_ego_records, negative_binomial_distribution,
                      poisson_distribution)
from .graph import Graph
from .percolation import (OutbreakEstimate, components, estimate_outbreak, percolate,
                          run_outbreak)

__version__ = "0.1.0"
