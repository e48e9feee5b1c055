"""Splitting an index set into the blocks that the detectors visit in turn."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .empirical import CovBand
from .errors import InputError

MIN_TAIL_BLOCK = 3


@dataclass(frozen=True)
class Partition:
    """Cluster labels ``0..K-1`` for every index.

    Label order is the order in which detectors visit the blocks.
    """

    assignments: np.ndarray

    @property
    def K(self) -> int:
        return int(self.assignments.max()) + 1 if self.assignments.size else 0

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.K)

    @property
    def blocks(self) -> list[np.ndarray]:
        order = np.argsort(self.assignments, kind="stable")
        cuts = np.cumsum(self.sizes)[:-1]
        return np.split(order, cuts)


def sequential_blocks(n_total: int, block_size: int) -> Partition:
    if block_size < 1:
        raise InputError("block_size must be positive")
    if block_size > n_total:
        raise InputError(f"block_size {block_size} exceeds series length {n_total}")
    labels = np.arange(n_total) // block_size
    tail = n_total % block_size
    if 0 < tail < MIN_TAIL_BLOCK and labels[-1] > 0:
        labels[-tail:] -= 1
    return Partition(labels)


def _wcss(points, labels, centers) -> float:
    return float(((points - centers[labels]) ** 2).sum())


def _sq_dist(points, centers):
    # Expanded form keeps memory at n x K rather than n x K x d.
    d2 = (
        (points ** 2).sum(1)[:, None]
        - 2.0 * points @ centers.T
        + (centers ** 2).sum(1)[None, :]
    )
    return np.maximum(d2, 0.0)


def kmeans_plus_plus(points: np.ndarray, K: int, rng: np.random.Generator) -> np.ndarray:
    n = len(points)
    centers = np.empty((K, points.shape[1]))
    centers[0] = points[rng.integers(n)]
    closest = ((points - centers[0]) ** 2).sum(1)
    for k in range(1, K):
        total = closest.sum()
        if total <= 0:
            idx = rng.integers(n)
        else:
            idx = int(np.searchsorted(np.cumsum(closest), rng.random() * total, side="right"))
            idx = min(idx, n - 1)
        centers[k] = points[idx]
        closest = np.minimum(closest, ((points - centers[k]) ** 2).sum(1))
    return centers


def centroids(points, labels, previous):
    """Cluster means; an empty cluster keeps its previous centre."""
    K, d = previous.shape
    counts = np.bincount(labels, minlength=K).astype(np.float64)
    sums = np.stack([np.bincount(labels, weights=points[:, c], minlength=K) for c in range(d)], axis=1)
    out = previous.copy()
    nz = counts > 0
    out[nz] = sums[nz] / counts[nz, None]
    return out


def lloyd(points, centers, max_iter: int = 100, history: list | None = None):
    labels = _sq_dist(points, centers).argmin(1)
    for _ in range(max_iter):
        centers = centroids(points, labels, centers)
        if history is not None:
            history.append(_wcss(points, labels, centers))
        new_labels = _sq_dist(points, centers).argmin(1)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    return labels, centers


def kmeans_partition(
    locations: Sequence, K: int, min_size: int = 1, seed: int = 0, max_iter: int = 100,
    standardize: bool = False,
) -> Partition:
    """k-means++ seeding followed by Lloyd iterations.

    Clusters with fewer than ``min_size`` members are dissolved one at a
    time, smallest first, into the nearest surviving centroid. Surviving
    clusters keep their seeding order.
    """
    pts = np.asarray(locations, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = len(pts)
    if K < 1 or min_size < 1:
        raise InputError("K and min_size must be positive")
    if K * min_size > n:
        raise InputError(f"cannot form {K} clusters of at least {min_size} from {n} points")
    if standardize:
        sd = pts.std(0)
        pts = (pts - pts.mean(0)) / np.where(sd > 0, sd, 1.0)
    rng = np.random.default_rng(seed)
    centers = kmeans_plus_plus(pts, K, rng)
    labels, centers = lloyd(pts, centers, max_iter)

    alive = np.ones(K, dtype=bool)
    while True:
        sizes = np.bincount(labels, minlength=K)
        small = np.flatnonzero(alive & (sizes < min_size))
        if small.size == 0:
            break
        victim = small[np.argmin(sizes[small])]
        alive[victim] = False
        moved = labels == victim
        if moved.any():
            d2 = _sq_dist(pts[moved], centers)
            d2[:, ~alive] = np.inf
            labels[moved] = d2.argmin(1)
        centers = centroids(pts, labels, centers)

    relabel = np.full(K, -1)
    relabel[alive] = np.arange(alive.sum())
    return Partition(relabel[labels])


@dataclass(frozen=True)
class BandLayout:
    boundaries: tuple[float, ...]
    bands: list[list[CovBand]]  # bands[cluster][band]
    valid: tuple[bool, ...]

    def band_index_valid(self) -> list[int]:
        return [b for b, ok in enumerate(self.valid) if ok]


def distance_bands(
    locations, partition: Partition, boundaries: Sequence[float], max_empty_fraction: float = 0.5
) -> BandLayout:
    """Bin all within-cluster pairs by distance ``h_lo <= d < h_hi``.

    A band empty in more than ``max_empty_fraction`` of the clusters is
    marked invalid.
    """
    bnd = np.asarray(boundaries, dtype=np.float64)
    if bnd.size < 2 or np.any(np.diff(bnd) <= 0) or bnd[0] < 0:
        raise InputError("boundaries must be ascending and start at h >= 0")
    pts = np.asarray(locations, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    per_cluster = []
    for members in partition.blocks:
        members = np.sort(members)
        i, j = np.triu_indices(len(members), k=1)
        d = np.sqrt(((pts[members[i]] - pts[members[j]]) ** 2).sum(1))
        which = np.searchsorted(bnd, d, side="right") - 1
        bands = []
        for b in range(bnd.size - 1):
            hit = which == b
            pairs = np.stack([members[i[hit]], members[j[hit]]], axis=1)
            bands.append(CovBand(float(bnd[b]), float(bnd[b + 1]), pairs))
        per_cluster.append(bands)
    n_clusters = len(per_cluster)
    valid = []
    for b in range(bnd.size - 1):
        empty = sum(1 for c in per_cluster if c[b].size == 0)
        valid.append(n_clusters > 0 and empty <= max_empty_fraction * n_clusters)
    return BandLayout(tuple(bnd.tolist()), per_cluster, tuple(valid))


def min_points_per_cell(volume: float, epsilon: float, p: int) -> float:
    """Lower bound on how many radius-epsilon balls cover a region of this volume."""
    if epsilon <= 0 or p < 1:
        raise InputError("need epsilon > 0 and p >= 1")
    return (volume / epsilon ** p) * math.gamma(p / 2 + 1) / math.pi ** (p / 2)
