"""Seeded simulators for time series and Gaussian fields."""

from .bessel import bessel_k1
from .gaussian_field import gen_spacetime, gp_sample, spacetime_rows, stable_cholesky
from .kernels import (
    AnisotropicNS,
    CovKernel,
    Exponential,
    Matern,
    Mixture,
    SeparableSpaceTime,
    SqExpStationary,
    SqrtWarped,
    Whittle,
)
from .timeseries import gen_ar1, gen_ar2, gen_arch1, gen_garch11, is_stationary_ar2

__all__ = [
    "bessel_k1", "gen_spacetime", "gp_sample", "spacetime_rows", "stable_cholesky",
    "AnisotropicNS", "CovKernel", "Exponential", "Matern", "Mixture", "SeparableSpaceTime",
    "SqExpStationary", "SqrtWarped", "Whittle",
    "gen_ar1", "gen_ar2", "gen_arch1", "gen_garch11", "is_stationary_ar2",
]
