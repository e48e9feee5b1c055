"""Gaussian random fields by Cholesky factorization, plus space-time recursions."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import InputError, SingularKernelError
from .kernels import CovKernel

JITTER_LADDER = (1e-10, 1e-9, 1e-8, 1e-7, 1e-6)
DEFAULT_CAP = 20_000


def stable_cholesky(cov: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor, adding the smallest diagonal jitter that works."""
    eye = np.eye(len(cov))
    for jitter in (0.0,) + JITTER_LADDER:
        try:
            return np.linalg.cholesky(cov + jitter * eye)
        except np.linalg.LinAlgError:
            continue
    raise SingularKernelError(f"Cholesky failed with jitter up to {JITTER_LADDER[-1]}")


def _checked(locations, cap):
    pts = np.asarray(locations, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if len(pts) > cap:
        raise InputError(f"{len(pts)} locations exceeds the cap of {cap}")
    return pts


def gp_sample(kernel: CovKernel, locations, seed: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """One zero-mean draw of the field at ``locations``."""
    pts = _checked(locations, cap)
    chol = stable_cholesky(kernel.matrix(pts))
    return chol @ np.random.default_rng(seed).standard_normal(len(pts))


def sine_modulation(t: np.ndarray) -> np.ndarray:
    """Time-varying innovation scale ``1.3 + sin(2 pi t / 400)``."""
    return 1.3 + np.sin(2 * np.pi * t / 400.0)


def gen_spacetime(
    spatial: CovKernel,
    rho_t: float,
    locations,
    T: int,
    seed: int,
    modulation: Callable[[np.ndarray], np.ndarray] | None = None,
    lag_product: float = 0.0,
    cap: int = DEFAULT_CAP,
) -> np.ndarray:
    """Field of shape ``(T, m)`` from

    ``X_t = rho_t X_{t-1} + lag_product X_{t-1} e_{t-1} + m(t) e_t``

    with ``X_0 = 0`` and ``e_t`` independent spatial draws.
    """
    if T < 1:
        raise InputError("T must be positive")
    pts = _checked(locations, cap)
    chol = stable_cholesky(spatial.matrix(pts))
    rng = np.random.default_rng(seed)
    scale = np.ones(T) if modulation is None else np.asarray(modulation(np.arange(1, T + 1)), float)
    out = np.empty((T, len(pts)))
    x_prev = np.zeros(len(pts))
    e_prev = np.zeros(len(pts))
    for t in range(T):
        e = chol @ rng.standard_normal(len(pts))
        x_prev = rho_t * x_prev + lag_product * x_prev * e_prev + scale[t] * e
        out[t] = x_prev
        e_prev = e
    return out


def spacetime_rows(locations, field: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Flatten a ``(T, m)`` field into ``(x, y, t)`` rows and values."""
    pts = np.asarray(locations, dtype=np.float64)
    T, m = field.shape
    t = np.repeat(np.arange(1, T + 1, dtype=np.float64), m)
    coords = np.column_stack([np.tile(pts, (T, 1)), t])
    return coords, field.ravel()
