"""Verdict counts for AR(1), AR(2) and GARCH(1,1) designs over many seeds.

Example: python scripts/time_series_matrix.py --seeds 20 --exact
"""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass

import numpy as np

from bayesstat.bounds import NonparametricPolicy
from bayesstat.detectors import detect_strict
from bayesstat.generators import gen_ar1, gen_ar2, gen_garch11
from bayesstat.partitioning import sequential_blocks


@dataclass(frozen=True)
class MatrixConfig:
    seeds: int = 20
    c1: float = 1.0
    length: int = 2500
    ar1_block: int = 50
    short_block: int = 5
    exact: bool = False


AR1_RHOS = ("uniform", 0.99, 0.995, 0.999, 0.9999, 1.0, 1.00005, 1.05, 2.0)
PAIRS = ((0.3, 0.4), (0.4, 0.3), (0.4, 0.5), (0.5, 0.4), (0.5, 0.9), (0.6, 0.6), (0.5, 0.6), (0.5, 0.5),
         (0.0, 1.0), (1.0, 0.0))


def count(cfg: MatrixConfig, make, block: int) -> Counter:
    part = sequential_blocks(cfg.length, block)
    policy = NonparametricPolicy(cfg.c1)
    return Counter(detect_strict(make(s), part, policy, exact=cfg.exact).verdict.value for s in range(cfg.seeds))


def run(cfg: MatrixConfig) -> list[tuple[str, Counter]]:
    rows = []
    for rho in AR1_RHOS:
        if rho == "uniform":
            make = lambda s: gen_ar1(cfg.length, np.random.default_rng(10_000 + s).uniform(-1, 1), s)
        else:
            make = lambda s, r=rho: gen_ar1(cfg.length, r, s)
        rows.append((f"ar1 rho={rho}", count(cfg, make, cfg.ar1_block)))
    for a, b in PAIRS:
        rows.append((f"ar2 ({a}, {b})", count(cfg, lambda s: gen_ar2(cfg.length, a, b, s), cfg.short_block)))
    for a, b in PAIRS:
        rows.append((f"garch ({a}, {b})",
                     count(cfg, lambda s: gen_garch11(cfg.length, 1.0, a, b, s), cfg.short_block)))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=MatrixConfig.seeds)
    ap.add_argument("--c1", type=float, default=MatrixConfig.c1)
    ap.add_argument("--exact", action="store_true", help="exact two-sample sup instead of the shortcut")
    args = ap.parse_args()
    cfg = MatrixConfig(seeds=args.seeds, c1=args.c1, exact=args.exact)
    print(f"{'design':<22} Stationary  Inconclusive  Nonstationary")
    for name, c in run(cfg):
        print(f"{name:<22} {c['Stationary']:>10}  {c['Inconclusive']:>12}  {c['Nonstationary']:>13}")


if __name__ == "__main__":
    main()
