"""Oscillation-frequency recovery from binned, power-transformed series.

The series is squashed into (0, 1) by the logistic map, raised to a power
``r`` that pushes everything but the peaks towards zero, optionally scaled,
and binned. Bin proportions are tracked with the Dirichlet recursion (finite
``M``) or the Dirichlet-process recursion (geometric bins). Bins whose limit
is nonzero carry the oscillation frequencies; bin 1 collects the
non-peak mass and is ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError
from .recursive_bayes import _beta_moments

INFINITE = math.inf
# Geometric breakpoints 1 - 2^-m stop being distinguishable from 1 in float64 here.
GEOMETRIC_LIMIT = 52


@dataclass(frozen=True)
class FrequencyConfig:
    r: float = 1.0
    multiplier: float = 1.0
    M: float = 50
    epsilon_group: float = 0.005
    center: bool = False

    def __post_init__(self):
        if not self.r > 0:
            raise InputError("power r must be positive")
        if not self.multiplier > 0:
            raise InputError("multiplier must be positive")
        if self.M != INFINITE and (int(self.M) != self.M or self.M < 2):
            raise InputError("M must be an integer >= 2 or infinite")
        if self.epsilon_group < 0:
            raise InputError("epsilon_group must be nonnegative")

    @property
    def infinite(self) -> bool:
        return self.M == INFINITE

    @property
    def n_bins(self) -> int:
        return GEOMETRIC_LIMIT if self.infinite else int(self.M)

    def breakpoints(self) -> np.ndarray:
        """``p~_0 = 0 < p~_1 < ...``, already scaled by the multiplier."""
        if self.infinite:
            m = np.arange(0, GEOMETRIC_LIMIT + 1, dtype=np.float64)
            p = 1.0 - 2.0 ** -m
            p[-1] = 1.0
        else:
            p = np.arange(int(self.M) + 1, dtype=np.float64) / self.M
        return p * self.multiplier


def logistic_transform(series) -> np.ndarray:
    x = np.asarray(series, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def bin_assign(z, breakpoints: Sequence[float]):
    """Right-closed bin index ``m`` with ``p~_{m-1} < z <= p~_m``; z = 0 goes to bin 1."""
    bp = np.asarray(breakpoints, dtype=np.float64)
    z_arr = np.asarray(z, dtype=np.float64)
    if np.any(z_arr < 0) or np.any(z_arr > bp[-1]):
        raise InputError(f"value outside [0, {bp[-1]}]")
    m = np.searchsorted(bp, z_arr, side="left")
    m = np.maximum(m, 1)
    return int(m) if m.ndim == 0 else m


def bin_assign_linear(z: float, breakpoints: Sequence[float]) -> int:
    """Reference implementation by linear scan."""
    if z < 0 or z > breakpoints[-1]:
        raise InputError("value outside the binned range")
    if z == 0:
        return 1
    for m in range(1, len(breakpoints)):
        if breakpoints[m - 1] < z <= breakpoints[m]:
            return m
    raise InputError("value outside the binned range")


def transformed_values(series, cfg: FrequencyConfig) -> np.ndarray:
    x = np.asarray(series, dtype=np.float64)
    if cfg.center:
        x = x - x.mean()
    return cfg.multiplier * logistic_transform(x) ** cfg.r


@dataclass
class FrequencyTrajectory:
    stages: np.ndarray  # recorded stage numbers (1-based)
    means: np.ndarray  # (len(stages), n_bins)
    variances: np.ndarray
    infinite: bool

    @property
    def final_means(self) -> np.ndarray:
        return self.means[-1]


def _recorded_stages(k: int, record_every: int) -> np.ndarray:
    stages = np.arange(record_every, k + 1, record_every)
    if stages.size == 0 or stages[-1] != k:
        stages = np.append(stages, k)
    return stages


def run_frequency_recursion(series, cfg: FrequencyConfig, record_every: int = 1) -> FrequencyTrajectory:
    """Posterior mean and variance of every bin proportion, stage by stage.

    ``record_every`` thins the stored trajectory (the last stage is always
    kept); the recursion itself visits every observation.
    """
    x = np.asarray(series, dtype=np.float64)
    if x.size < 2:
        raise InputError("series needs at least two values")
    if record_every < 1:
        raise InputError("record_every must be positive")
    cats = bin_assign(transformed_values(x, cfg), cfg.breakpoints())
    stages = _recorded_stages(x.size, record_every)
    kf = stages.astype(np.float64)
    all_k = np.arange(1, x.size + 1, dtype=np.float64)
    mass = np.cumsum(1.0 / (all_k * all_k))[stages - 1]
    n_bins = cfg.n_bins
    counts = np.empty((stages.size, n_bins))
    for m in range(1, n_bins + 1):
        where = np.flatnonzero(cats == m) + 1
        counts[:, m - 1] = np.searchsorted(where, stages, side="right")
    if cfg.infinite:
        base = 2.0 ** -np.arange(1, n_bins + 1, dtype=np.float64)
        a = base[None, :] * mass[:, None] + counts
        total = (mass + kf)[:, None]
    else:
        a = mass[:, None] + counts
        total = (n_bins * mass + kf)[:, None]
    means, variances = _beta_moments(a, total - a)
    return FrequencyTrajectory(stages, means, variances, cfg.infinite)


@dataclass(frozen=True)
class ExtractedFrequency:
    frequency: float
    bins: tuple[int, ...]


def extract_frequencies(final_means: Sequence[float], epsilon_group: float = 0.005) -> list[ExtractedFrequency]:
    """Sum consecutive above-threshold bins (bin 1 excluded) into one frequency each."""
    means = np.asarray(final_means, dtype=np.float64)
    out: list[ExtractedFrequency] = []
    run: list[int] = []
    for m in range(2, means.size + 1):
        if means[m - 1] > epsilon_group:
            run.append(m)
            continue
        if run:
            out.append(ExtractedFrequency(float(means[[b - 1 for b in run]].sum()), tuple(run)))
            run = []
    if run:
        out.append(ExtractedFrequency(float(means[[b - 1 for b in run]].sum()), tuple(run)))
    return out


def detect_frequencies(series, cfg: FrequencyConfig, record_every: int = 1):
    traj = run_frequency_recursion(series, cfg, record_every)
    return traj, extract_frequencies(traj.final_means, cfg.epsilon_group)


# ------------------------------------------------------------------ presets


def single_frequency_series(T: int = 500, seed: int = 0, amplitude: float = 2.0, omega: float = 1 / 50,
                            phase: float = 0.6 * math.pi, sigma: float = 5.0) -> np.ndarray:
    t = np.arange(1, T + 1, dtype=np.float64)
    noise = np.random.default_rng(seed).normal(0.0, sigma, T)
    return amplitude * np.cos(2 * math.pi * omega * t + phase) + noise


def multiple_frequency_series(T: int = 100) -> np.ndarray:
    t = np.arange(1, T + 1, dtype=np.float64)
    x = np.zeros(T)
    for a, b, f in ((2, 3, 6 / 100), (4, 5, 10 / 100), (6, 7, 40 / 100)):
        x += a * np.cos(2 * math.pi * t * f) + b * np.sin(2 * math.pi * t * f)
    return x
