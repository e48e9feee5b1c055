"""Stationarity detectors.

Every detector follows the same loop: compute one statistic per block,
compare it with the bound for that stage, feed the resulting indicator into
the Beta recursion, and read a verdict off the tail of the posterior-mean
trajectory.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .empirical import SortedSample, band_correlation, ks_sup_block_vs_pooled, supnorm_block_vs_pooled
from .errors import InputError
from .partitioning import BandLayout, Partition, distance_bands
from .recursive_bayes import BetaRecursionState, beta_mean_var, beta_update

MIN_BLOCK = 3


class Verdict(str, enum.Enum):
    STATIONARY = "Stationary"
    NONSTATIONARY = "Nonstationary"
    INCONCLUSIVE = "Inconclusive"
    NOT_VERIFIABLE = "NotVerifiable"


@dataclass(frozen=True)
class VerdictRule:
    theta_hi: float = 0.8
    theta_lo: float = 0.2
    tail_fraction: float = 0.2

    def __post_init__(self):
        if not 0 <= self.theta_lo < self.theta_hi <= 1:
            raise InputError("need 0 <= theta_lo < theta_hi <= 1")
        if not 0 < self.tail_fraction <= 1:
            raise InputError("tail_fraction must lie in (0, 1]")


def verdict(trajectory: Sequence[float], theta_hi: float = 0.8, theta_lo: float = 0.2,
            tail_fraction: float = 0.2) -> Verdict:
    rule = VerdictRule(theta_hi, theta_lo, tail_fraction)
    traj = np.asarray(trajectory, dtype=np.float64)
    if traj.size == 0:
        raise InputError("empty trajectory")
    tail = max(1, math.ceil(rule.tail_fraction * traj.size))
    level = float(traj[-tail:].mean())
    if level >= rule.theta_hi:
        return Verdict.STATIONARY
    if level <= rule.theta_lo:
        return Verdict.NONSTATIONARY
    return Verdict.INCONCLUSIVE


@dataclass
class IndicatorChain:
    s: np.ndarray
    c: np.ndarray
    y: np.ndarray
    post_mean: np.ndarray
    post_var: np.ndarray

    def stages(self) -> list[dict]:
        return [
            {"j": j + 1, "s": float(self.s[j]), "c": float(self.c[j]), "y": int(self.y[j]),
             "post_mean": float(self.post_mean[j]), "post_var": float(self.post_var[j])}
            for j in range(self.s.size)
        ]


def run_indicator_chain(stats: np.ndarray, policy) -> IndicatorChain:
    """Fold block statistics through the bound policy and the Beta recursion."""
    k = len(stats)
    c = np.empty(k)
    y = np.empty(k, dtype=np.int64)
    mean = np.empty(k)
    var = np.empty(k)
    bound_state = policy.initial()
    post = BetaRecursionState()
    y_prev = None
    for j in range(1, k + 1):
        c[j - 1], bound_state = policy.advance(bound_state, j, y_prev)
        y_prev = int(stats[j - 1] <= c[j - 1])
        y[j - 1] = y_prev
        post = beta_update(post, y_prev)
        mean[j - 1], var[j - 1] = beta_mean_var(post)
    return IndicatorChain(np.asarray(stats, dtype=np.float64), c, y, mean, var)


@dataclass
class DetectionReport:
    chain: IndicatorChain
    verdict: Verdict
    config: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    bands: list[dict] = field(default_factory=list)

    @property
    def post_mean(self) -> np.ndarray:
        return self.chain.post_mean

    def to_dict(self) -> dict:
        from . import __version__

        return {
            "verdict": self.verdict.value,
            "stages": self.chain.stages() if self.chain is not None else [],
            "bands": self.bands,
            "config": self.config,
            "seed": self.seed,
            "version": __version__,
        }


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(fn, items))


def block_statistics(values, partition: Partition, exact: bool = False, threads: int = 1) -> np.ndarray:
    """Per-block distance between the block ECDF and the pooled ECDF."""
    x = np.asarray(values, dtype=np.float64)
    pooled = SortedSample.of(x)
    stat = ks_sup_block_vs_pooled if exact else supnorm_block_vs_pooled
    blocks = partition.blocks
    return np.array(_map(lambda b: stat(SortedSample.of(x[b]), pooled), blocks, threads))


def detect_strict(values, partition: Partition, policy, rule: VerdictRule = VerdictRule(),
                  exact: bool = False, threads: int = 1, min_block: int = MIN_BLOCK) -> DetectionReport:
    x = np.asarray(values, dtype=np.float64)
    if len(x) != len(partition.assignments):
        raise InputError("partition does not cover the data")
    if partition.K < 2:
        raise InputError("need at least two blocks")
    if partition.sizes.min() < min_block:
        raise InputError(f"every block needs at least {min_block} observations")
    stats = block_statistics(x, partition, exact=exact, threads=threads)
    chain = run_indicator_chain(stats, policy)
    v = verdict(chain.post_mean, rule.theta_hi, rule.theta_lo, rule.tail_fraction)
    config = {"statistic": "ks_exact" if exact else "supnorm_shortcut", "K": partition.K,
              **policy.describe(), "theta_hi": rule.theta_hi, "theta_lo": rule.theta_lo,
              "tail_fraction": rule.tail_fraction}
    return DetectionReport(chain, v, config)


def band_statistics(values, layout: BandLayout, band: int) -> np.ndarray:
    """|cluster correlation - pooled correlation| for clusters holding pairs in ``band``."""
    x = np.asarray(values, dtype=np.float64)
    corr, weight = [], []
    for cluster in layout.bands:
        cb = cluster[band]
        if cb.size == 0:
            continue
        try:
            corr.append(band_correlation(x, cb))
        except InputError:
            # constant values in the band: no linear association to measure
            corr.append(0.0)
        weight.append(cb.size)
    corr = np.asarray(corr)
    weight = np.asarray(weight, dtype=np.float64)
    pooled = float(np.dot(weight, corr) / weight.sum()) if weight.size else 0.0
    return np.abs(corr - pooled)


def combine_band_verdicts(verdicts: Sequence[Verdict]) -> Verdict:
    if not verdicts:
        return Verdict.NOT_VERIFIABLE
    if any(v is Verdict.NONSTATIONARY for v in verdicts):
        return Verdict.NONSTATIONARY
    if all(v is Verdict.STATIONARY for v in verdicts):
        return Verdict.STATIONARY
    return Verdict.INCONCLUSIVE


def detect_covariance(values, locations, partition: Partition, boundaries: Sequence[float], policy,
                      rule: VerdictRule = VerdictRule()) -> tuple[list[DetectionReport], DetectionReport]:
    """Covariance stationarity, one indicator chain per valid distance band.

    Returns the per-band reports and an overall report whose verdict is
    Nonstationary when any band is, Stationary when all bands are.
    """
    layout = distance_bands(locations, partition, boundaries)
    per_band, summaries = [], []
    for b in layout.band_index_valid():
        stats = band_statistics(values, layout, b)
        if stats.size < 2:
            continue
        chain = run_indicator_chain(stats, policy)
        v = verdict(chain.post_mean, rule.theta_hi, rule.theta_lo, rule.tail_fraction)
        report = DetectionReport(chain, v, {"h_lo": layout.boundaries[b], "h_hi": layout.boundaries[b + 1]})
        per_band.append(report)
        summaries.append({"h_lo": layout.boundaries[b], "h_hi": layout.boundaries[b + 1],
                          "verdict": v.value, "stages": chain.stages()})
    overall = combine_band_verdicts([r.verdict for r in per_band])
    config = {"boundaries": list(layout.boundaries), "valid_bands": list(layout.valid),
              **policy.describe(), "theta_hi": rule.theta_hi, "theta_lo": rule.theta_lo,
              "tail_fraction": rule.tail_fraction}
    empty = IndicatorChain(*(np.empty(0),) * 5)
    return per_band, DetectionReport(empty, overall, config, bands=summaries)
