"""Numerical laboratory for L²-growth and decay of wave-type equations with
potentials, built on the integral identity satisfied by ``v = ∫₀ᵗ u ds``."""

from .evolve import InstabilityError, cfl_dt, run_simulation
from .functionals import DiagnosticSample, DiagnosticSeries
from .numgrid import Field, Grid, make_grid
from .potential import compute_data_functionals, eval_potential
from .ratefit import RateFit, boundedness_score, fit_power, fit_sqrtlog

__version__ = "0.1.0"

__all__ = [
    "DiagnosticSample",
    "DiagnosticSeries",
    "Field",
    "Grid",
    "InstabilityError",
    "RateFit",
    "boundedness_score",
    "cfl_dt",
    "compute_data_functionals",
    "eval_potential",
    "fit_power",
    "fit_sqrtlog",
    "make_grid",
    "run_simulation",
]
