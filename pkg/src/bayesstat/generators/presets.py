"""Named simulation designs used by the CLI and the experiment scripts."""

from __future__ import annotations

import numpy as np

from .gaussian_field import gen_spacetime, gp_sample, sine_modulation
from .kernels import AnisotropicNS, Exponential, Mixture, SqExpStationary, SqrtWarped, Whittle


def sqrt_uniform_locations(n: int, seed: int) -> np.ndarray:
    """Square roots of uniform points on the unit square.

    Spreads points away from the origin, which keeps the warped kernel
    numerically well conditioned.
    """
    return np.sqrt(np.random.default_rng(seed).uniform(size=(n, 2)))


def centered_square_locations(n: int, side: float, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).uniform(-side / 2, side / 2, size=(n, 2))


SPATIAL_KERNELS = {
    "spatial-stationary": lambda p: SqExpStationary(),
    "spatial-nonstationary": lambda p: SqrtWarped(),
    "spatial-mixture": lambda p: Mixture(p),
    "spatial-whittle": lambda p: Whittle(0.8),
}


def spatial_preset(name: str, n: int, seed: int, p: float = 0.99):
    locs = sqrt_uniform_locations(n, seed)
    kernel = SPATIAL_KERNELS[name](p)
    return locs, gp_sample(kernel, locs, seed + 1)


SPACETIME_MODELS = ("S1", "S2", "NS1", "NS2", "NS3")


def spacetime_preset(model: str, m: int, T: int, seed: int, psi: float = 1.0,
                     side: float = 5.0, lam: float = 20.0):
    """Space-time designs: AR(0.5) in time with spatially correlated noise.

    S1: exponential noise. S2: adds a lagged product term. NS1: sinusoidal
    innovation scale. NS2: lagged product with anisotropic nonstationary
    noise. NS3: anisotropic noise with sinusoidal scale.
    """
    if model not in SPACETIME_MODELS:
        raise KeyError(model)
    locs = centered_square_locations(m, side, seed)
    anis = model in ("NS2", "NS3")
    kernel = AnisotropicNS(lam) if anis else Exponential(psi)
    modulation = sine_modulation if model in ("NS1", "NS3") else None
    lag = 0.4 if model in ("S2", "NS2") else 0.0
    field = gen_spacetime(kernel, 0.5, locs, T, seed + 1, modulation=modulation, lag_product=lag)
    return locs, field
