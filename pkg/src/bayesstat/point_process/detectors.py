"""Complete-spatial-randomness and stationarity detectors for point patterns."""

from __future__ import annotations

import numpy as np

from ..detectors import DetectionReport, VerdictRule, detect_strict, run_indicator_chain, verdict
from ..empirical import integrated_g_discrepancy, intensity_mle, nn_distances
from ..errors import InputError
from ..partitioning import Partition, kmeans_partition
from .pattern import PointPattern

MIN_CLUSTER = 3
# Cluster statistics are only comparable across patterns at a similar
# cluster size; ten points per cluster keeps the per-cluster ECDF noise
# equal between sparse and dense patterns.
POINTS_PER_CLUSTER = 10


def default_cluster_count(n: int) -> int:
    return max(2, n // POINTS_PER_CLUSTER)


def cluster_pattern(pattern: PointPattern, K: int, seed: int, min_size: int = MIN_CLUSTER) -> Partition:
    """K-means on coordinates measured from the window's lower-left corner."""
    if K < 2:
        raise InputError("need at least two clusters")
    if pattern.n < K * min_size:
        raise InputError(f"{pattern.n} points cannot fill {K} clusters of {min_size}")
    w = pattern.window
    local = pattern.points - np.array([w.x0, w.y0])
    return kmeans_partition(local, K, min_size=min_size, seed=seed)


def csr_statistics(pattern: PointPattern, partition: Partition) -> np.ndarray:
    lam = intensity_mle(pattern.n, pattern.window.area)
    return np.array([
        integrated_g_discrepancy(nn_distances(pattern.points[b]), lam) for b in partition.blocks
    ])


def detect_csr(pattern: PointPattern, K: int, policy, seed: int = 0,
               rule: VerdictRule = VerdictRule()) -> DetectionReport:
    """Per cluster, compare the within-cluster nearest-neighbour ECDF with
    the Poisson G function at the global intensity estimate."""
    partition = cluster_pattern(pattern, K, seed)
    stats = csr_statistics(pattern, partition)
    chain = run_indicator_chain(stats, policy)
    v = verdict(chain.post_mean, rule.theta_hi, rule.theta_lo, rule.tail_fraction)
    config = {"K": partition.K, "n": pattern.n, **policy.describe(), "theta_hi": rule.theta_hi,
              "theta_lo": rule.theta_lo, "tail_fraction": rule.tail_fraction}
    return DetectionReport(chain, v, config, seed)


def detect_pp_stationarity(pattern: PointPattern, K: int, policy, seed: int = 0,
                           rule: VerdictRule = VerdictRule(), exact: bool = False) -> DetectionReport:
    """Strict stationarity of the nearest-neighbour distances across clusters."""
    partition = cluster_pattern(pattern, K, seed)
    report = detect_strict(pattern.nn, partition, policy, rule, exact=exact)
    report.seed = seed
    return report
