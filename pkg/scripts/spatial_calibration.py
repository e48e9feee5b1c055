"""Map verdicts over the C1 grid for the spatial GP designs.

Each row is one realization; each character is the verdict at one grid
value of C1 (N, I or S, from 0.01 up to 2.00). A discriminating C1 exists
only when a column reads S on every stationary row and N on every
nonstationary row.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from bayesstat.bounds import NonparametricPolicy, default_grid
from bayesstat.detectors import block_statistics, run_indicator_chain, verdict
from bayesstat.generators.presets import spatial_preset
from bayesstat.partitioning import kmeans_partition


@dataclass(frozen=True)
class SpatialConfig:
    n: int = 2000
    K: int = 100
    min_size: int = 10
    seeds: tuple[int, ...] = (100, 101, 102, 103)
    p: float = 0.99


def verdict_map(stats) -> str:
    return "".join(verdict(run_indicator_chain(stats, NonparametricPolicy(c)).post_mean).value[0]
                   for c in default_grid())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=SpatialConfig.n)
    ap.add_argument("--K", type=int, default=SpatialConfig.K)
    args = ap.parse_args()
    cfg = SpatialConfig(n=args.n, K=args.K)
    for name in ("spatial-stationary", "spatial-nonstationary", "spatial-mixture"):
        for seed in cfg.seeds:
            locs, values = spatial_preset(name, cfg.n, seed, cfg.p)
            part = kmeans_partition(locs, cfg.K, min_size=cfg.min_size, seed=seed)
            print(f"{name:<22} {seed:>4} {verdict_map(block_statistics(values, part))}")


if __name__ == "__main__":
    main()
