"""Spectra of the logarithmic (2D) and Newtonian (3D) potential operators.

Closed forms on discs and balls, a Galerkin solver for other planar
domains, and radius sweeps that fit the small-radius scaling laws.
"""

from .ball import ball_eigenvalues, ball_normalized_integral, legendre_cos_integral, solve_mu_halfint
from .disc import DiscSpec, disc_eigenvalues, disc_modes, psi_a, solve_mu_k0, solve_mu_kgeq1
from .domains import Domain2D
from .galerkin import assemble, build_mesh, eigfun_integral, monotonicity_check, spectrum
from .scaling import SweepConfig, fit_power_law, fit_power_log_law, prop2_report, theorem1_report
from .specfun import BesselOrder, bessel_j, bessel_zero

__all__ = [
    "BesselOrder",
    "DiscSpec",
    "Domain2D",
    "SweepConfig",
    "assemble",
    "ball_eigenvalues",
    "ball_normalized_integral",
    "bessel_j",
    "bessel_zero",
    "build_mesh",
    "disc_eigenvalues",
    "disc_modes",
    "eigfun_integral",
    "fit_power_law",
    "fit_power_log_law",
    "legendre_cos_integral",
    "monotonicity_check",
    "prop2_report",
    "psi_a",
    "solve_mu_halfint",
    "solve_mu_k0",
    "solve_mu_kgeq1",
    "spectrum",
    "theorem1_report",
]
