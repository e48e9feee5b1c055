"""CSR, stationarity and Poisson-independence verdicts for HPP, IHPP and Matern patterns.

C1 for the CSR and stationarity detectors is calibrated in discriminating
mode on one homogeneous and one inhomogeneous benchmark pattern (seed 100),
with about ten points per cluster.
"""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass

from bayesstat.bounds import NonparametricPolicy, calibrate_c1
from bayesstat.detectors import block_statistics
from bayesstat.dp_independence import detect_poisson
from bayesstat.point_process import (
    Window,
    default_cluster_count,
    detect_csr,
    detect_pp_stationarity,
    gen_cluster,
    gen_hpp,
    gen_ihpp,
)
from bayesstat.point_process.detectors import cluster_pattern, csr_statistics


@dataclass(frozen=True)
class SuiteConfig:
    seeds: int = 10
    benchmark_seed: int = 100
    poisson_K: int = 50
    poisson_c1: float = 0.5


def design(name: str, seed: int):
    if name == "hpp":
        return gen_hpp(1.0, Window(0, 50, 0, 50), seed)
    if name == "ihpp":
        return gen_ihpp(lambda x, y: 100 * (x + y), 1000.0, Window(0, 5, 0, 5), seed)
    return gen_cluster("matern", 10, 5, Window(0, 10, 0, 10), seed, radius=0.1)


def benchmark_c1(stat_fn, seed: int) -> float:
    stats = {}
    for name in ("hpp", "ihpp"):
        p = design(name, seed)
        stats[name] = stat_fn(p, cluster_pattern(p, default_cluster_count(p.n), seed))
    return calibrate_c1([stats["hpp"]], [stats["ihpp"]], "discriminating")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=SuiteConfig.seeds)
    args = ap.parse_args()
    cfg = SuiteConfig(seeds=args.seeds)
    c1_csr = benchmark_c1(csr_statistics, cfg.benchmark_seed)
    c1_stat = benchmark_c1(lambda p, part: block_statistics(p.nn, part), cfg.benchmark_seed)
    print(f"calibrated C1: csr {c1_csr}, stationarity {c1_stat}")
    for name in ("hpp", "ihpp", "matern"):
        csr, stat, indep = Counter(), Counter(), Counter()
        for seed in range(cfg.seeds):
            p = design(name, seed)
            K = default_cluster_count(p.n)
            csr[detect_csr(p, K, NonparametricPolicy(c1_csr), seed=seed).verdict.value] += 1
            stat[detect_pp_stationarity(p, K, NonparametricPolicy(c1_stat), seed=seed).verdict.value] += 1
            report = detect_poisson(p, cfg.poisson_K, NonparametricPolicy(cfg.poisson_c1), seed=seed)
            indep[report.verdict.value] += 1
        print(f"{name:<7} csr {dict(csr)}  stationarity {dict(stat)}  independence {dict(indep)}")


if __name__ == "__main__":
    main()
