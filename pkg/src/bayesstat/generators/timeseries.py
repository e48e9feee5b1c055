"""Seeded simulators for the autoregressive and volatility models."""

from __future__ import annotations

import numpy as np

from ..errors import InputError


def gen_ar1(n: int, rho: float, seed: int) -> np.ndarray:
    """``X_t = rho X_{t-1} + e_t`` with ``X_0 ~ U(-1, 1)``; returns X_1..X_n.

    Explosive coefficients overflow to +-inf after enough steps, which the
    rank-based detectors handle as ordinary (tied) extreme values.
    """
    if n < 1:
        raise InputError("n must be positive")
    rng = np.random.default_rng(seed)
    x_prev = rng.uniform(-1.0, 1.0)
    eps = rng.standard_normal(n)
    out = np.empty(n)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(n):
            x_prev = rho * x_prev + eps[t]
            out[t] = x_prev
    return out


def is_stationary_ar2(alpha: float, beta: float) -> bool:
    return alpha + beta < 1 and beta - alpha < 1 and beta > -1


def gen_ar2(n: int, alpha: float, beta: float, seed: int) -> np.ndarray:
    """``x_t = alpha x_{t-1} + beta x_{t-2} + e_t`` started from ``x_1 = x_2 = 0``."""
    if n < 3:
        raise InputError("n must be at least 3")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(n)
    x = np.zeros(n)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(2, n):
            x[t] = alpha * x[t - 1] + beta * x[t - 2] + eps[t]
    return x


def gen_arch1(n: int, omega: float, alpha: float, seed: int) -> np.ndarray:
    """``x_t = sigma_t e_t``, ``sigma_t^2 = omega + alpha x_{t-1}^2``, ``x_1 = 0``."""
    if omega <= 0 or alpha < 0:
        raise InputError("need omega > 0 and alpha >= 0")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(n)
    x = np.zeros(n)
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(1, n):
            x[t] = np.sqrt(omega + alpha * x[t - 1] ** 2) * eps[t]
    return x


def gen_garch11(n: int, omega: float, alpha: float, beta: float, seed: int) -> np.ndarray:
    """GARCH(1,1) with ``x_1 = 0`` and ``sigma_1 = 0``."""
    if omega <= 0 or alpha < 0 or beta < 0:
        raise InputError("need omega > 0 and alpha, beta >= 0")
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(n)
    x = np.zeros(n)
    var = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for t in range(1, n):
            var = omega + alpha * x[t - 1] ** 2 + beta * var
            x[t] = np.sqrt(var) * eps[t]
    return x
