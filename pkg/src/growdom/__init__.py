"""Harvested logistic population dynamics on an isotropically growing habitat.

The library solves the fixed-domain transform of the growing-habitat
problem, classifies parameters against the analytic extinction/persistence
threshold, computes the positive steady state of the fully grown domain,
and numerically checks the ordering machinery (comparison principle,
Laplacian sign preservation, envelope sandwiching) that underpins the
long-time results.
"""

from .classify import Regime, RegimeReport, classify, critical_harvest, sweep
from .eigen import EigenError, EigenPair, principal_eigen_analytic, principal_eigen_numeric
from .grids import Field, Grid, build_grid, inner, laplacian, mass, sup_norm
from .growth import GrowthFamily, GrowthFunction, pushforward
from .solver import (
    ModelParams,
    SolverError,
    Trajectory,
    initial_condition,
    integrate,
    stable_dt,
    step,
)
from .steady import SteadyError, SteadyRegime, SteadyResult, residual, solve_steady
from .verify import (
    EnvelopePair,
    check_comparison,
    check_laplacian_sign,
    make_envelopes,
    random_ordered_pair,
    sandwich_run,
)

__version__ = "0.1.0"

__all__ = [
    "Field",
    "Grid",
    "GrowthFamily",
    "GrowthFunction",
    "EigenError",
    "EigenPair",
    "EnvelopePair",
    "ModelParams",
    "Regime",
    "RegimeReport",
    "SolverError",
    "SteadyError",
    "SteadyRegime",
    "SteadyResult",
    "Trajectory",
    "build_grid",
    "check_comparison",
    "check_laplacian_sign",
    "classify",
    "critical_harvest",
    "initial_condition",
    "inner",
    "integrate",
    "laplacian",
    "make_envelopes",
    "mass",
    "principal_eigen_analytic",
    "principal_eigen_numeric",
    "pushforward",
    "random_ordered_pair",
    "residual",
    "sandwich_run",
    "solve_steady",
    "stable_dt",
    "step",
    "sup_norm",
    "sweep",
]
