"""Seeded point-process simulators."""

from __future__ import annotations

import math
from typing import Callable, Union

import numpy as np

from ..errors import InputError
from ..generators import CovKernel, gp_sample
from .pattern import PointPattern, Window

IntensityFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
Rate = Union[float, IntensityFn]


def gen_hpp(lam: float, window: Window, seed: int | np.random.Generator) -> PointPattern:
    if lam < 0:
        raise InputError("intensity must be non-negative")
    rng = np.random.default_rng(seed)
    n = rng.poisson(lam * window.area)
    return PointPattern(window, window.uniform(n, rng))


def _thin(pts, lam_values, lam_max, rng):
    if np.any(lam_values > lam_max * (1 + 1e-12)):
        raise InputError("intensity exceeds the dominating bound")
    keep = rng.random(len(pts)) * lam_max < lam_values
    return pts[keep]


def gen_ihpp(lambda_fn: IntensityFn, lambda_max: float, window: Window,
             seed: int | np.random.Generator) -> PointPattern:
    """Inhomogeneous Poisson process by independent thinning."""
    rng = np.random.default_rng(seed)
    base = gen_hpp(lambda_max, window, rng).points
    if lambda_max == 0:
        return PointPattern(window, base)
    values = np.asarray(lambda_fn(base[:, 0], base[:, 1]), dtype=np.float64)
    return PointPattern(window, _thin(base, values, lambda_max, rng))


def _rate_at(rate: Rate, pts: np.ndarray) -> np.ndarray:
    if callable(rate):
        return np.asarray(rate(pts[:, 0], pts[:, 1]), dtype=np.float64)
    return np.full(len(pts), float(rate))


CLUSTER_KINDS = ("matern", "thomas", "neyman_scott")


def gen_cluster(kind: str, kappa: Rate, mu: Rate, window: Window, seed: int,
                radius: float = 0.1, sigma2: float = 0.01, m_fixed: int = 5,
                kappa_max: float | None = None) -> PointPattern:
    """Parent-offspring cluster processes.

    Parents come from a (possibly inhomogeneous) Poisson process on the
    window grown by the cluster reach, so clusters centred just outside
    still contribute. Offspring counts are Poisson(mu(parent)), or fixed
    for ``neyman_scott``. Offspring sit uniformly in a disc of ``radius``
    (``matern``, ``neyman_scott``) or are normal around the parent with
    variance ``sigma2`` per axis (``thomas``). Offspring outside the window
    are dropped.
    """
    if kind not in CLUSTER_KINDS:
        raise InputError(f"unknown cluster kind {kind!r}")
    rng = np.random.default_rng(seed)
    reach = 4 * math.sqrt(sigma2) if kind == "thomas" else radius
    outer = window.expanded(reach)
    if callable(kappa):
        if kappa_max is None:
            raise InputError("an intensity function needs kappa_max")
        parents = gen_ihpp(kappa, kappa_max, outer, rng).points
    else:
        parents = gen_hpp(kappa, outer, rng).points
    if kind == "neyman_scott":
        counts = np.full(len(parents), int(m_fixed))
    else:
        counts = rng.poisson(np.maximum(_rate_at(mu, parents), 0.0))
    centre = np.repeat(parents, counts, axis=0)
    total = int(counts.sum())
    if kind == "thomas":
        offspring = centre + rng.normal(0.0, math.sqrt(sigma2), size=(total, 2))
    else:
        r = radius * np.sqrt(rng.random(total))
        theta = 2 * np.pi * rng.random(total)
        offspring = centre + np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    return PointPattern(window, offspring[window.contains(offspring)])


def gen_lgcp(mean_fn: Rate, kernel: CovKernel, grid_res: int, window: Window, seed: int) -> PointPattern:
    """Log-Gaussian Cox process on a ``grid_res x grid_res`` intensity grid."""
    if grid_res < 16:
        raise InputError("grid_res must be at least 16")
    rng = np.random.default_rng(seed)
    xs = window.x0 + (np.arange(grid_res) + 0.5) * (window.x1 - window.x0) / grid_res
    ys = window.y0 + (np.arange(grid_res) + 0.5) * (window.y1 - window.y0) / grid_res
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    cells = np.column_stack([gx.ravel(), gy.ravel()])
    field = gp_sample(kernel, cells, int(rng.integers(2**31)))
    log_lam = _rate_at(mean_fn, cells) + field
    lam = np.exp(log_lam).reshape(grid_res, grid_res)
    lam_max = float(lam.max())
    base = gen_hpp(lam_max, window, rng).points
    ix = np.minimum(((base[:, 0] - window.x0) / (window.x1 - window.x0) * grid_res).astype(int), grid_res - 1)
    iy = np.minimum(((base[:, 1] - window.y0) / (window.y1 - window.y0) * grid_res).astype(int), grid_res - 1)
    return PointPattern(window, _thin(base, lam[ix, iy], lam_max, rng))


class _Grid:
    """Bucket index for counting R-close neighbours."""

    def __init__(self, R: float):
        self.R = R
        self.cells: dict[tuple[int, int], set[int]] = {}

    def key(self, p):
        return (int(math.floor(p[0] / self.R)), int(math.floor(p[1] / self.R)))

    def add(self, i, p):
        self.cells.setdefault(self.key(p), set()).add(i)

    def remove(self, i, p):
        self.cells[self.key(p)].discard(i)

    def close(self, p, pts, skip=-1) -> int:
        cx, cy = self.key(p)
        r2 = self.R * self.R
        count = 0
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for j in self.cells.get((cx + dx, cy + dy), ()):
                    if j != skip:
                        q = pts[j]
                        if (q[0] - p[0]) ** 2 + (q[1] - p[1]) ** 2 <= r2:
                            count += 1
        return count


def gen_strauss(beta: float, gamma: float, R: float, window: Window, seed: int,
                n_sweeps: int = 100_000) -> PointPattern:
    """Strauss process by birth-death-move Metropolis-Hastings.

    Targets density proportional to ``beta^n gamma^s`` where ``s`` counts
    pairs closer than ``R``. Starts from a Poisson(beta) pattern; each of the
    ``n_sweeps`` proposals is a birth, death or relocation with equal
    probability.
    """
    if gamma > 1:
        raise InputError("gamma > 1 gives a non-integrable density")
    if not (gamma > 0 and beta > 0 and R > 0):
        raise InputError("need beta > 0, 0 < gamma <= 1 and R > 0")
    rng = np.random.default_rng(seed)
    start = gen_hpp(beta, window, rng).points
    pts: dict[int, tuple[float, float]] = {}
    grid = _Grid(R)
    next_id = 0
    for p in start:
        pts[next_id] = (float(p[0]), float(p[1]))
        grid.add(next_id, pts[next_id])
        next_id += 1
    ids = list(pts)
    pos = {i: k for k, i in enumerate(ids)}
    mass = beta * window.area
    log_gamma = math.log(gamma)

    def drop(i):
        k = pos.pop(i)
        last = ids.pop()
        if last != i:
            ids[k] = last
            pos[last] = k
        grid.remove(i, pts.pop(i))

    for _ in range(n_sweeps):
        move = rng.integers(3)
        u = rng.random()
        if move == 0:
            p = tuple(window.uniform(1, rng)[0])
            t = grid.close(p, pts)
            if math.log(u) < math.log(mass / (len(ids) + 1)) + t * log_gamma:
                pts[next_id] = p
                grid.add(next_id, p)
                pos[next_id] = len(ids)
                ids.append(next_id)
                next_id += 1
        elif move == 1:
            if not ids:
                continue
            i = ids[rng.integers(len(ids))]
            t = grid.close(pts[i], pts, skip=i)
            if math.log(u) < math.log(len(ids) / mass) - t * log_gamma:
                drop(i)
        else:
            if not ids:
                continue
            i = ids[rng.integers(len(ids))]
            p = tuple(window.uniform(1, rng)[0])
            delta = grid.close(p, pts, skip=i) - grid.close(pts[i], pts, skip=i)
            if math.log(u) < delta * log_gamma:
                grid.remove(i, pts[i])
                pts[i] = p
                grid.add(i, p)
    final = np.array([pts[i] for i in sorted(pts)], dtype=np.float64).reshape(-1, 2)
    return PointPattern(window, final)


def close_pair_count(pattern: PointPattern, R: float) -> int:
    from scipy.spatial import cKDTree

    if pattern.n < 2:
        return 0
    return len(cKDTree(pattern.points).query_pairs(R))


def quadrat_counts(pattern: PointPattern, nx: int, ny: int | None = None) -> np.ndarray:
    ny = ny or nx
    w = pattern.window
    counts, _, _ = np.histogram2d(pattern.points[:, 0], pattern.points[:, 1], bins=[nx, ny],
                                  range=[[w.x0, w.x1], [w.y0, w.y1]])
    return counts


def dispersion_index(pattern: PointPattern, nx: int) -> float:
    """Variance-to-mean ratio of quadrat counts; about 1 for a Poisson pattern."""
    c = quadrat_counts(pattern, nx).ravel()
    return float(c.var(ddof=1) / c.mean())
