"""Discrete analytic functions on the right half-lattice.

Exact Gaussian-rational arithmetic (or complex floats) for the lattice
Cauchy-Riemann equation, the basis polynomials ``z^(n)``, rational
functions given by state-space realizations, Schur-class kernels from
coisometric colligations, and mesh refinement limits.
"""
from .basis import (CoefficientSeries, basis_poly, basis_row, basis_table, e_lambda,
                    series_eval, taylor_coefficients, z_apply)
from .kernels import IMPLEMENTATION
from .lattice import (LatticeFunction, LatticePoint, PathSpec, Window, apply_difference,
                      discrete_integral, is_discrete_analytic)
from .realization import (InadmissibleError, Realization, combine, invert, kernel_realization,
                          markov_params, mcmillan_degree, minimal_realization, rational_eval,
                          transfer_eval)
from .scalar import GaussianRational, parse_scalar
from .schur import Colligation, gram_psd, kernel_closed, kernel_series, random_coisometry

__version__ = "0.1.0"

__all__ = [
    "CoefficientSeries", "basis_poly", "basis_row", "basis_table", "e_lambda", "series_eval",
    "taylor_coefficients", "z_apply", "IMPLEMENTATION", "LatticeFunction", "LatticePoint",
    "PathSpec", "Window", "apply_difference", "discrete_integral", "is_discrete_analytic",
    "InadmissibleError", "Realization", "combine", "invert", "kernel_realization",
    "markov_params", "mcmillan_degree", "minimal_realization", "rational_eval", "transfer_eval",
    "GaussianRational", "parse_scalar", "Colligation", "gram_psd", "kernel_closed",
    "kernel_series", "random_coisometry",
]
