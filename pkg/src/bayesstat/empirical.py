"""Empirical distribution functions and the block statistics built on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import BandEmptyError, InputError


@dataclass(frozen=True)
class SortedSample:
    values: np.ndarray

    @classmethod
    def of(cls, data: Sequence[float]) -> "SortedSample":
        arr = np.sort(np.asarray(data, dtype=np.float64).ravel())
        if arr.size == 0:
            raise InputError("sample must be nonempty")
        arr.flags.writeable = False
        return cls(arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def max(self) -> float:
        return float(self.values[-1])


def ecdf_eval(sample: SortedSample, x) -> float | np.ndarray:
    """Fraction of the sample that is <= x. Vectorized over ``x``."""
    counts = np.searchsorted(sample.values, x, side="right")
    if np.ndim(counts) == 0:
        return int(counts) / sample.n
    return counts / sample.n


def supnorm_block_vs_pooled(block: SortedSample, pooled: SortedSample) -> float:
    """Shortcut for the gap between a block's ECDF and the pooled ECDF.

    Returns ``1 - F_pooled(max(block))``. When the block holds the pooled
    maximum, that value is removed from the block (every copy of it) and
    the largest remaining block value is used instead. A block made only of
    the pooled maximum gets ``1 - F_pooled`` just below the maximum, which
    is ``1/n`` for a unique maximum. This shortcut equals the two-sided sup
    only when the block sits low in the pooled ranking; see
    :func:`ks_sup_block_vs_pooled` for the exact value.

    A constant pooled sample gives 0: every block ECDF coincides with the
    pooled one, and there is no value below the maximum to fall back on.
    """
    if block.n == 0:
        raise InputError("block must be nonempty")
    top = block.max
    if pooled.values[0] == pooled.max:
        return 0.0
    if top != pooled.max:
        return 1.0 - ecdf_eval(pooled, top)
    below = int(np.searchsorted(block.values, top, side="left"))
    if below == 0:
        return 1.0 - int(np.searchsorted(pooled.values, top, side="left")) / pooled.n
    return 1.0 - ecdf_eval(pooled, float(block.values[below - 1]))


def ks_sup_block_vs_pooled(block: SortedSample, pooled: SortedSample) -> float:
    """Exact sup over x of |F_block(x) - F_pooled(x)|.

    Both functions are right-continuous step functions jumping only at
    pooled values, so checking every distinct pooled value is enough.
    """
    if block.n == 0:
        raise InputError("block must be nonempty")
    grid = np.unique(pooled.values)
    gap = np.abs(ecdf_eval(block, grid) - ecdf_eval(pooled, grid))
    return float(gap.max())


def supnorm_all_blocks(values: np.ndarray, blocks: Sequence[np.ndarray], exact: bool = False) -> np.ndarray:
    """Statistic for every block against the pooled sample of all blocks."""
    pooled = SortedSample.of(np.concatenate([values[b] for b in blocks]))
    stat = ks_sup_block_vs_pooled if exact else supnorm_block_vs_pooled
    return np.array([stat(SortedSample.of(values[b]), pooled) for b in blocks])


@dataclass(frozen=True)
class CovBand:
    h_lo: float
    h_hi: float
    pairs: np.ndarray  # (P, 2) location indices, lower index first

    def __post_init__(self):
        if not 0 <= self.h_lo < self.h_hi:
            raise InputError("band needs 0 <= h_lo < h_hi")

    @property
    def size(self) -> int:
        return int(len(self.pairs))


def block_covariance(values: np.ndarray, band: CovBand) -> float:
    """Half the mean lagged product minus the product of the two end means."""
    if band.size == 0:
        raise BandEmptyError(f"no pairs in band [{band.h_lo}, {band.h_hi})")
    first = values[band.pairs[:, 0]]
    second = values[band.pairs[:, 1]]
    n = band.size
    return float(np.sum(first * second) / (2 * n) - first.mean() * second.mean())


def band_correlation(values: np.ndarray, band: CovBand) -> float:
    """Band covariance scaled by the spreads of the pair ends, clamped to [-1, 1]."""
    cov = block_covariance(values, band)
    first = values[band.pairs[:, 0]]
    second = values[band.pairs[:, 1]]
    return to_correlation(cov, float(first.std()), float(second.std()))


def to_correlation(cov: float, sd1: float, sd2: float) -> float:
    if sd1 <= 0 or sd2 <= 0:
        raise InputError("standard deviations must be positive")
    return float(np.clip(cov / (sd1 * sd2), -1.0, 1.0))


def nn_distances(points) -> np.ndarray:
    """Distance from every point to its nearest other point (exact, O(n^2))."""
    pts = np.asarray(getattr(points, "points", points), dtype=np.float64)
    if pts.ndim != 2 or len(pts) < 2:
        raise InputError("need at least two points")
    out = np.empty(len(pts))
    chunk = max(1, 4_000_000 // len(pts))
    for start in range(0, len(pts), chunk):
        block = pts[start:start + chunk]
        d2 = ((block[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1)
        d2[np.arange(len(block)), np.arange(start, start + len(block))] = np.inf
        out[start:start + chunk] = np.sqrt(d2.min(axis=1))
    return out


def nn_distances_grid(points) -> np.ndarray:
    """Cell-grid accelerated nearest-neighbour distances.

    Uses a k-d tree; squared distances are recomputed the same way as in
    :func:`nn_distances` so both routes return identical floats.
    """
    from scipy.spatial import cKDTree

    pts = np.asarray(getattr(points, "points", points), dtype=np.float64)
    if pts.ndim != 2 or len(pts) < 2:
        raise InputError("need at least two points")
    _, idx = cKDTree(pts).query(pts, k=2)
    out = np.empty(len(pts))
    for i, (a, b) in enumerate(idx):
        j = b if a == i else a
        out[i] = np.sqrt(((pts[i] - pts[j]) ** 2).sum())
    return out


def intensity_mle(n_points: int, area: float) -> float:
    if area <= 0:
        raise InputError("window area must be positive")
    return n_points / area


def g_theoretical(lam, x):
    """Nearest-neighbour distance CDF of a homogeneous Poisson process."""
    return -np.expm1(-lam * np.pi * np.square(x))


def integrated_g_discrepancy(block_distances: Sequence[float], lambda_hat: float) -> float:
    """Mean absolute gap between the block's distance ECDF and the Poisson G."""
    d = np.asarray(block_distances, dtype=np.float64)
    if d.size == 0:
        raise InputError("need at least one distance")
    sample = SortedSample.of(d)
    return float(np.mean(np.abs(ecdf_eval(sample, d) - g_theoretical(lambda_hat, d))))
