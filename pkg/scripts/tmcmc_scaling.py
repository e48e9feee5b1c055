"""Acceptance rate and convergence verdict of additive TMCMC across scales.

Runs on the standard normal product target in d dimensions and diagnoses
the first coordinate in sequential blocks.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from bayesstat.tmcmc import TmcmcConfig, diagnose_convergence, tmcmc_run_gaussian


@dataclass(frozen=True)
class ScalingConfig:
    d: int = 100
    iters: int = 100_000
    block: int = 500
    seeds: int = 5
    ells: tuple[float, ...] = (0.001, 0.1, 1.0, 2.4, 10.0, 100.0, 1000.0)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=ScalingConfig.seeds)
    ap.add_argument("--iters", type=int, default=ScalingConfig.iters)
    args = ap.parse_args()
    cfg = ScalingConfig(seeds=args.seeds, iters=args.iters)
    print(f"{'ell':>8}  {'acceptance':>10}  verdicts")
    for ell in cfg.ells:
        rates, verdicts = [], []
        for seed in range(cfg.seeds):
            chain = tmcmc_run_gaussian(TmcmcConfig(cfg.d, ell=ell, seed=seed), cfg.iters)
            rates.append(chain.acceptance_rate)
            verdicts.append(diagnose_convergence(chain.first, cfg.block).verdict.value[:4])
        print(f"{ell:>8g}  {sum(rates) / len(rates):>10.4f}  {' '.join(verdicts)}")


if __name__ == "__main__":
    main()
