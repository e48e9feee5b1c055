"""Covariance kernels for the Gaussian-field simulators.

Each kernel maps two location arrays of shape ``(n, d)`` and ``(m, d)`` to an
``(n, m)`` covariance block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError
from .bessel import bessel_k1


def _as_points(s) -> np.ndarray:
    arr = np.asarray(s, dtype=np.float64)
    return arr[:, None] if arr.ndim == 1 else arr


def pairwise_distance(a, b=None) -> np.ndarray:
    a = _as_points(a)
    b = a if b is None else _as_points(b)
    d2 = ((a[:, None, :] - b[None, :, :]) ** 2).sum(-1)
    return np.sqrt(d2)


class CovKernel:
    kind: str = "abstract"

    def __call__(self, a, b=None) -> np.ndarray:
        raise NotImplementedError

    def matrix(self, locations) -> np.ndarray:
        k = self(locations)
        return 0.5 * (k + k.T)

    def describe(self) -> dict:
        out = {"kind": self.kind}
        out.update({k: v for k, v in vars(self).items() if not k.startswith("_")})
        return out


@dataclass
class SqExpStationary(CovKernel):
    """``exp(-scale * |s1 - s2|^2)``."""

    scale: float = 5.0
    kind: str = field(default="sqexp_stationary", init=False)

    def __call__(self, a, b=None):
        return np.exp(-self.scale * pairwise_distance(a, b) ** 2)


@dataclass
class SqrtWarped(CovKernel):
    """Squared exponential after a coordinate-wise square root.

    Not a function of ``s1 - s2`` alone, so the field is nonstationary.
    """

    scale: float = 5.0
    kind: str = field(default="sqrt_warped", init=False)

    def __call__(self, a, b=None):
        a = _as_points(a)
        if np.any(a < 0) or (b is not None and np.any(_as_points(b) < 0)):
            raise InputError("square-root warping needs non-negative coordinates")
        return np.exp(-self.scale * pairwise_distance(np.sqrt(a), None if b is None else np.sqrt(_as_points(b))) ** 2)


@dataclass
class Mixture(CovKernel):
    """``p * stationary + (1 - p) * sqrt-warped``."""

    p: float = 0.5
    scale: float = 5.0
    kind: str = field(default="mixture", init=False)

    def __call__(self, a, b=None):
        if not 0 <= self.p <= 1:
            raise InputError("mixture weight must lie in [0, 1]")
        return (self.p * SqExpStationary(self.scale)(a, b)
                + (1 - self.p) * SqrtWarped(self.scale)(a, b))


@dataclass
class Whittle(CovKernel):
    """``(d/psi) K1(d/psi)``, equal to 1 at d = 0."""

    psi: float = 0.8
    kind: str = field(default="whittle", init=False)

    def __call__(self, a, b=None):
        u = pairwise_distance(a, b) / self.psi
        out = np.ones_like(u)
        pos = u > 0
        out[pos] = u[pos] * bessel_k1(u[pos])
        return out


@dataclass
class Exponential(CovKernel):
    psi: float = 1.0
    kind: str = field(default="exponential", init=False)

    def __call__(self, a, b=None):
        return np.exp(-pairwise_distance(a, b) / self.psi)


@dataclass
class Matern(CovKernel):
    """Matern family in the ``sqrt(2 nu) d / rho`` parametrisation.

    Supported smoothness values are 0.5, 1, 1.5 and 2.5.
    """

    sigma2: float = 1.0
    rho: float = 1.0
    nu: float = 0.5
    kind: str = field(default="matern", init=False)

    def __call__(self, a, b=None):
        d = pairwise_distance(a, b)
        if self.nu == 0.5:
            return self.sigma2 * np.exp(-d / self.rho)
        u = math.sqrt(2 * self.nu) * d / self.rho
        if self.nu == 1.0:
            out = np.ones_like(u)
            pos = u > 0
            out[pos] = u[pos] * bessel_k1(u[pos])
            return self.sigma2 * out
        if self.nu == 1.5:
            return self.sigma2 * (1 + u) * np.exp(-u)
        if self.nu == 2.5:
            return self.sigma2 * (1 + u + u * u / 3) * np.exp(-u)
        raise InputError(f"unsupported Matern smoothness {self.nu}")


@dataclass
class AnisotropicNS(CovKernel):
    """Nonstationary kernel with a location-dependent rotation.

    ``Sigma(s) = G(s) diag(1, 1/2) G(s)^T`` with
    ``G = [[g1, -g2], [g2, g1]]``, ``g1 = log(u/lam + 0.75)`` and
    ``g2 = (u/lam)^2 + (v/lam)^2`` for ``s = (u, v)``.
    """

    lam: float = 20.0
    kind: str = field(default="ns2_anisotropic", init=False)

    def sigma(self, s) -> np.ndarray:
        s = _as_points(s)
        u, v = s[:, 0] / self.lam, s[:, 1] / self.lam
        if np.any(u + 0.75 <= 0):
            raise InputError("locations too far left for the log rotation term")
        g1 = np.log(u + 0.75)
        g2 = u * u + v * v
        # G diag(1, 1/2) G^T in closed form
        a = g1 * g1 + 0.5 * g2 * g2
        c = g2 * g2 + 0.5 * g1 * g1
        b = g1 * g2 - 0.5 * g1 * g2
        return np.stack([a, b, c], axis=1)

    def __call__(self, a, b=None):
        pa = _as_points(a)
        pb = pa if b is None else _as_points(b)
        sa, sb = self.sigma(pa), self.sigma(pb)
        det_a = sa[:, 0] * sa[:, 2] - sa[:, 1] ** 2
        det_b = sb[:, 0] * sb[:, 2] - sb[:, 1] ** 2
        m00 = (sa[:, None, 0] + sb[None, :, 0]) / 2
        m01 = (sa[:, None, 1] + sb[None, :, 1]) / 2
        m11 = (sa[:, None, 2] + sb[None, :, 2]) / 2
        det_m = m00 * m11 - m01 ** 2
        dx = pa[:, None, 0] - pb[None, :, 0]
        dy = pa[:, None, 1] - pb[None, :, 1]
        # 2 h^T (S1 + S2)^{-1} h = h^T M^{-1} h with M the average
        q = (m11 * dx * dx - 2 * m01 * dx * dy + m00 * dy * dy) / det_m
        pref = np.abs(det_a)[:, None] ** 0.25 * np.abs(det_b)[None, :] ** 0.25 / np.sqrt(np.abs(det_m))
        return pref * np.exp(-np.sqrt(np.maximum(q, 0.0)))


@dataclass
class SeparableSpaceTime(CovKernel):
    """``spatial(s1, s2) * rho^|t1 - t2| / (1 - rho^2)`` on ``(x, y, t)`` rows."""

    spatial: CovKernel = field(default_factory=SqExpStationary)
    rho: float = 0.5
    kind: str = field(default="separable_st", init=False)

    def __call__(self, a, b=None):
        pa = _as_points(a)
        pb = pa if b is None else _as_points(b)
        if not abs(self.rho) < 1:
            raise InputError("separable form needs |rho| < 1")
        lag = np.abs(pa[:, None, -1] - pb[None, :, -1])
        return self.spatial(pa[:, :-1], pb[:, :-1]) * self.rho ** lag / (1 - self.rho ** 2)

    def describe(self) -> dict:
        return {"kind": self.kind, "rho": self.rho, "spatial": self.spatial.describe()}


KERNELS = {
    "sqexp_stationary": SqExpStationary,
    "sqrt_warped": SqrtWarped,
    "mixture": Mixture,
    "whittle": Whittle,
    "exponential": Exponential,
    "matern": Matern,
    "ns2_anisotropic": AnisotropicNS,
}
