"""Mutual independence through Dirichlet-process smoothed distribution functions.

With a DP(alpha G0) prior on the joint law of ``K`` columns, the posterior
mean of the joint CDF after ``n`` rows is

    (alpha * G0(X <= t) + #{rows <= t}) / (alpha + n).

Conditional CDFs are ratios of such prefix joints. Under mutual
independence the conditional of column j given the earlier columns matches
its marginal, so the detector tracks the largest gap between the two, one
column at a time, through the usual Beta recursion.

``G0`` is a multivariate normal fitted to the data. Its probabilities
come from one fixed Monte Carlo sample, reused for every threshold, so
the joint, conditional and marginal evaluations are mutually consistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .detectors import DetectionReport, IndicatorChain, Verdict, VerdictRule, run_indicator_chain, verdict
from .errors import ConditioningError, InputError
from .generators import stable_cholesky

MC_DRAWS = 10_000
PREFIX_FLOOR = 1e-6

CONCLUSION = {
    Verdict.STATIONARY: "independent (Poisson-compatible)",
    Verdict.NONSTATIONARY: "dependent (non-Poisson)",
    Verdict.INCONCLUSIVE: "inconclusive",
}


@dataclass
class DpJointModel:
    alpha: float
    base_mean: np.ndarray
    base_cov: np.ndarray
    data: np.ndarray  # (n, K)
    draws: np.ndarray  # (MC_DRAWS, K) sample from G0
    maximizers: list[float] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def K(self) -> int:
        return self.data.shape[1]


def build_dp_model(clusters: Sequence[Sequence[float]], alpha: float = 1.0, seed: int = 0,
                   mc_draws: int = MC_DRAWS) -> DpJointModel:
    """Stack the columns truncated to the shortest one and fit G0."""
    if len(clusters) < 2:
        raise InputError("need at least two columns")
    if alpha <= 0:
        raise InputError("alpha must be positive")
    lengths = [len(c) for c in clusters]
    if min(lengths) < 2:
        raise InputError("every column needs at least two values")
    n = min(lengths)
    data = np.column_stack([np.asarray(c, dtype=np.float64)[:n] for c in clusters])
    mean = data.mean(axis=0)
    cov = np.atleast_2d(np.cov(data, rowvar=False))
    chol = stable_cholesky(cov)
    z = np.random.default_rng(seed).standard_normal((mc_draws, data.shape[1]))
    draws = mean + z @ chol.T
    return DpJointModel(alpha, mean, cov, data, draws)


def _mix(model: DpJointModel, base_prob, count):
    return (model.alpha * base_prob + count) / (model.alpha + model.n)


def dp_joint_cdf(model: DpJointModel, t: Sequence[float], j: int | None = None) -> float:
    """Posterior-mean probability that the first ``j`` columns are all <= ``t``."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    j = t.size if j is None else j
    if not 1 <= j <= model.K or t.size < j:
        raise InputError(f"prefix length must lie in 1..{model.K}")
    base = np.all(model.draws[:, :j] <= t[:j], axis=1).mean()
    count = np.all(model.data[:, :j] <= t[:j], axis=1).sum()
    return float(_mix(model, base, count))


def dp_marginal_cdf(model: DpJointModel, j: int, tj: float) -> float:
    """Posterior-mean CDF of column ``j`` (1-based) on its own."""
    if not 1 <= j <= model.K:
        raise InputError(f"column must lie in 1..{model.K}")
    base = (model.draws[:, j - 1] <= tj).mean()
    count = (model.data[:, j - 1] <= tj).sum()
    return float(_mix(model, base, count))


def dp_conditional_cdf(model: DpJointModel, t: Sequence[float]) -> float:
    """P(X_j <= t_j | X_1 <= t_1, ..., X_{j-1} <= t_{j-1}) with j = len(t)."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    j = t.size
    if j == 1:
        return dp_joint_cdf(model, t, 1)
    den = dp_joint_cdf(model, t, j - 1)
    if den <= 0:
        raise ConditioningError("conditioning event has zero estimated probability")
    return dp_joint_cdf(model, t, j) / den


def _below_counts(sorted_grid, values, weights=None):
    """For each grid value g, the (weighted) number of ``values`` <= g."""
    idx = np.searchsorted(sorted_grid, values, side="left")
    hist = np.bincount(idx, weights=weights, minlength=sorted_grid.size + 1)[: sorted_grid.size]
    return np.cumsum(hist)


def _first_pair_scan(model: DpJointModel):
    x1, x2 = model.data[:, 0], model.data[:, 1]
    g1, g2 = np.unique(x1), np.unique(x2)

    def grid_counts(a, b):
        ia = np.searchsorted(g1, a, side="left")
        ib = np.searchsorted(g2, b, side="left")
        keep = (ia < g1.size) & (ib < g2.size)
        hist = np.zeros((g1.size, g2.size))
        np.add.at(hist, (ia[keep], ib[keep]), 1.0)
        return hist.cumsum(0).cumsum(1)

    joint = _mix(model, grid_counts(model.draws[:, 0], model.draws[:, 1]) / len(model.draws),
                 grid_counts(x1, x2))
    first = _mix(model, _below_counts(g1, model.draws[:, 0]) / len(model.draws), _below_counts(g1, x1))
    marg = _mix(model, _below_counts(g2, model.draws[:, 1]) / len(model.draws), _below_counts(g2, x2))
    gap = np.abs(joint / first[:, None] - marg[None, :])
    a, b = np.unravel_index(np.argmax(gap), gap.shape)
    return float(gap[a, b]), float(g1[a]), float(g2[b])


def greedy_sup_difference(model: DpJointModel, j: int) -> tuple[float, float]:
    """Largest |conditional - marginal| gap for column ``j`` (1-based, j >= 2).

    Column 2 scans every pair of observed values for columns 1 and 2 and
    caches both maximizers. Column ``j >= 3`` keeps the earlier maximizers
    fixed and scans the observed values of column ``j`` alone. Call in
    order ``j = 2, 3, ...``.
    """
    if not 2 <= j <= model.K:
        raise InputError(f"column must lie in 2..{model.K}")
    if j == 2:
        sup, t1, t2 = _first_pair_scan(model)
        model.maximizers = [t1, t2]
        return sup, t2
    if len(model.maximizers) != j - 1:
        raise InputError("earlier columns must be processed first")
    prefix = np.asarray(model.maximizers)
    data_in = np.all(model.data[:, : j - 1] <= prefix, axis=1)
    draws_in = np.all(model.draws[:, : j - 1] <= prefix, axis=1)
    den = _mix(model, draws_in.mean(), data_in.sum())
    if den <= 0:
        raise ConditioningError("conditioning event has zero estimated probability")
    grid = np.unique(model.data[:, j - 1])
    col_d, col_g = model.data[:, j - 1], model.draws[:, j - 1]
    joint = _mix(model, _below_counts(grid, col_g[draws_in]) / len(model.draws),
                 _below_counts(grid, col_d[data_in]))
    marg = _mix(model, _below_counts(grid, col_g) / len(model.draws), _below_counts(grid, col_d))
    gap = np.abs(joint / den - marg)
    k = int(np.argmax(gap))
    model.maximizers.append(float(grid[k]))
    return float(gap[k]), float(grid[k])


def prefix_mass(model: DpJointModel) -> float:
    """Joint CDF of the cached maximizers."""
    return dp_joint_cdf(model, model.maximizers, len(model.maximizers))


def independence_statistics(model: DpJointModel) -> np.ndarray:
    stats = []
    for j in range(2, model.K + 1):
        if j > 2 and prefix_mass(model) < PREFIX_FLOOR:
            break
        stats.append(greedy_sup_difference(model, j)[0])
    return np.asarray(stats)


def detect_mutual_independence(clusters: Sequence[Sequence[float]], policy, alpha: float = 1.0,
                               seed: int = 0, rule: VerdictRule = VerdictRule()) -> DetectionReport:
    """Stage j compares column j's conditional and marginal CDFs (j = 2..K).

    Stops early when the cached conditioning event becomes numerically
    negligible.
    """
    if len(clusters) < 3:
        raise InputError("need at least three columns")
    model = build_dp_model(clusters, alpha, seed)
    stats = independence_statistics(model)
    if stats.size == 0:
        raise InputError("no usable stages")
    chain = run_indicator_chain(stats, policy)
    v = verdict(chain.post_mean, rule.theta_hi, rule.theta_lo, rule.tail_fraction)
    config = {"alpha": alpha, "K": model.K, "stages_used": int(stats.size), "rows": model.n,
              "conclusion": CONCLUSION[v], **policy.describe(), "theta_hi": rule.theta_hi,
              "theta_lo": rule.theta_lo, "tail_fraction": rule.tail_fraction}
    return DetectionReport(chain, v, config, seed)


def cluster_log_distances(pattern, partition, matching: str = "sorted", seed: int = 0) -> list[np.ndarray]:
    """Within-cluster log nearest-neighbour distances, one array per cluster.

    ``sorted`` orders each cluster's values by point location (x, then y);
    ``random`` shuffles them with ``seed``.
    """
    from .empirical import nn_distances

    rng = np.random.default_rng(seed)
    out = []
    for block in partition.blocks:
        pts = pattern.points[block]
        d = nn_distances(pts)
        if matching == "sorted":
            order = np.lexsort((pts[:, 1], pts[:, 0]))
        elif matching == "random":
            order = rng.permutation(len(pts))
        else:
            raise InputError(f"unknown matching {matching!r}")
        out.append(np.log(d[order]))
    return out


def detect_poisson(pattern, K: int, policy, alpha: float = 1.0, seed: int = 0,
                   matching: str = "sorted", rule: VerdictRule = VerdictRule()) -> DetectionReport:
    """Poisson characterization of a pattern via independence across clusters."""
    from .point_process.detectors import cluster_pattern

    partition = cluster_pattern(pattern, K, seed)
    clusters = cluster_log_distances(pattern, partition, matching, seed)
    report = detect_mutual_independence(clusters, policy, alpha, seed, rule)
    report.config["matching"] = matching
    return report
