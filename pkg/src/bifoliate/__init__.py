"""Exact invariants of hyperbolic toral matrices and combinatorial plane models."""
from .contfrac import PeriodicContinuedFraction, cf_expand, good_approximations
from .exactmath import IntMatrix2, QuadraticNumber, slope_action
from .invariant import conjugate_up_to_powers, distinguish_planes, gl2z_equivalence_witness
from .lattice import eigen_slopes, enumerate_crossings, sigma_period
from .scalloped import FatGraph, build_lozenge_complex, build_plane_complex, x_infinity_points

__version__ = "0.1.0"

__all__ = [
    "IntMatrix2",
    "QuadraticNumber",
    "slope_action",
    "PeriodicContinuedFraction",
    "cf_expand",
    "good_approximations",
    "eigen_slopes",
    "enumerate_crossings",
    "sigma_period",
    "distinguish_planes",
    "gl2z_equivalence_witness",
    "conjugate_up_to_powers",
    "FatGraph",
    "build_lozenge_complex",
    "build_plane_complex",
    "x_infinity_points",
]
