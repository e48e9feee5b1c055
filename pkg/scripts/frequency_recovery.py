"""Extracted frequencies for the single- and multiple-frequency designs.

Prints every above-threshold group of bins with its summed posterior mean.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from bayesstat.frequency import (
    FrequencyConfig,
    detect_frequencies,
    multiple_frequency_series,
    single_frequency_series,
)


@dataclass(frozen=True)
class RecoveryConfig:
    single_T: int = 500
    long_T: int = 500_000
    sigma: float = 5.0
    seed: int = 0
    epsilon: float = 0.005


def show(label: str, found) -> None:
    print(label)
    for f in found:
        print(f"  bins {f.bins[0]:>2}-{f.bins[-1]:<2}  frequency {f.frequency:.4f}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=RecoveryConfig.seed)
    ap.add_argument("--epsilon", type=float, default=RecoveryConfig.epsilon)
    args = ap.parse_args()
    cfg = RecoveryConfig(seed=args.seed, epsilon=args.epsilon)
    x = single_frequency_series(cfg.single_T, cfg.seed, sigma=cfg.sigma)
    show(f"single frequency, T={cfg.single_T}, r=1000, M=50",
         detect_frequencies(x, FrequencyConfig(r=1000, M=50, epsilon_group=cfg.epsilon))[1])
    show("multiple frequencies, T=100, r=1, M=50",
         detect_frequencies(multiple_frequency_series(100), FrequencyConfig(M=50, epsilon_group=cfg.epsilon))[1])
    x = single_frequency_series(cfg.long_T, cfg.seed, sigma=cfg.sigma)
    show(f"single frequency, T={cfg.long_T}, r=1000, M=40",
         detect_frequencies(x, FrequencyConfig(r=1000, M=40, epsilon_group=cfg.epsilon), record_every=1000)[1])


if __name__ == "__main__":
    main()
