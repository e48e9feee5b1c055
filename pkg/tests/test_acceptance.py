"""Numbered acceptance criteria, one test each.

Each test gathers every sub-check before asserting, so a failure message
shows the whole picture (counts per design, calibrated constants, timings).
Run this file directly, or through pytest, to get one PASS/FAIL line per
criterion in the terminal summary.
"""

import json
import math
import time

import numpy as np
import pytest

from bayesstat.bounds import NonparametricPolicy, calibrate_c1
from bayesstat.cli import main as cli_main
from bayesstat.detectors import Verdict, block_statistics, detect_strict
from bayesstat.dp_independence import build_dp_model, detect_poisson, dp_joint_cdf, independence_statistics
from bayesstat.empirical import SortedSample, supnorm_block_vs_pooled
from bayesstat.errors import CalibrationError
from bayesstat.frequency import (
    FrequencyConfig,
    detect_frequencies,
    multiple_frequency_series,
    single_frequency_series,
)
from bayesstat.generators import gen_ar1, gen_ar2, gen_garch11
from bayesstat.generators.presets import spatial_preset
from bayesstat.partitioning import kmeans_partition, sequential_blocks
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
from bayesstat.recursive_bayes import (
    BetaRecursionState,
    DirichletRecursionState,
    beta_mean_var,
    beta_trajectory,
    beta_update,
    dirichlet_means,
    dirichlet_trajectory,
    dirichlet_update,
    dp_trajectory,
    geometric_base,
)
from bayesstat.tmcmc import TmcmcConfig, diagnose_convergence, tmcmc_run_gaussian

S, N = Verdict.STATIONARY, Verdict.NONSTATIONARY


def tally(verdicts):
    return {v.value: sum(1 for u in verdicts if u is v) for v in Verdict if any(u is v for u in verdicts)}


def closed_form_beta(y):
    k = len(y)
    mass = math.fsum(1.0 / (j * j) for j in range(1, k + 1))
    ones = float(sum(y))
    mean = (mass + ones) / (k + 2 * mass)
    var = (mass + ones) * (k + mass - ones) / ((k + 2 * mass) ** 2 * (1 + k + 2 * mass))
    return mean, var


def brute_sup(block, pooled):
    """max |F_block - F_pooled| over the pooled order statistics."""
    b, p = np.sort(block), np.sort(pooled)
    fb = np.searchsorted(b, p, side="right") / b.size
    fp = np.searchsorted(p, p, side="right") / p.size
    return float(np.max(np.abs(fb - fp)))


# ------------------------------------------------------------------ 1


@pytest.mark.criterion(1, "recursion closed forms")
def test_criterion_01_recursion_closed_forms():
    start = time.perf_counter()
    rng = np.random.default_rng(0)
    worst_mean = worst_var = 0.0
    for _ in range(1000):
        k = int(np.exp(rng.uniform(0, math.log(10_000))))
        y = rng.integers(0, 2, size=k)
        state = BetaRecursionState()
        for v in y:
            state = beta_update(state, int(v))
        mean, var = beta_mean_var(state)
        ref_mean, ref_var = closed_form_beta(y.tolist())
        worst_mean = max(worst_mean, abs(mean - ref_mean))
        worst_var = max(worst_var, abs(var - ref_var) / ref_var)
        tm, tv = beta_trajectory(y)
        worst_mean = max(worst_mean, abs(tm[-1] - ref_mean))
        worst_var = max(worst_var, abs(tv[-1] - ref_var) / ref_var)

    worst_sum = 0.0
    for _ in range(200):
        k, M = int(rng.integers(1, 2000)), int(rng.integers(2, 60))
        cats = rng.integers(1, M + 1, size=k)
        means, _ = dirichlet_trajectory(cats, M)
        worst_sum = max(worst_sum, float(np.max(np.abs(means.sum(axis=1) - 1))))
        dp_means, _ = dp_trajectory(cats, M)
        mass = np.cumsum(1.0 / np.arange(1, k + 1) ** 2)
        tail = geometric_base(M) * mass / (mass + np.arange(1, k + 1))
        worst_sum = max(worst_sum, float(np.max(np.abs(dp_means.sum(axis=1) + tail - 1))))
    state = DirichletRecursionState(7)
    for c in rng.integers(1, 8, size=500):
        state = dirichlet_update(state, int(c))
        worst_sum = max(worst_sum, abs(dirichlet_means(state).sum() - 1))
    elapsed = time.perf_counter() - start

    detail = dict(worst_mean=worst_mean, worst_var_rel=worst_var, worst_sum=worst_sum, seconds=elapsed)
    assert worst_mean <= 1e-12 and worst_var <= 1e-12 and worst_sum <= 1e-10 and elapsed < 5, detail


# ------------------------------------------------------------------ 2


@pytest.mark.criterion(2, "sup-norm shortcut equals brute-force sup (non-max branch)")
def test_criterion_02_supnorm_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    mismatches, examples = 0, []
    for _ in range(10_000):
        n = int(rng.integers(2, 201))
        pooled = rng.permutation(n).astype(float) + rng.random()
        below_max = pooled[pooled < pooled.max()]
        block = rng.choice(below_max, size=int(rng.integers(1, n)), replace=False)
        s = supnorm_block_vs_pooled(SortedSample.of(block), SortedSample.of(pooled))
        ref = brute_sup(block, pooled)
        if s != ref:
            mismatches += 1
            if len(examples) < 3:
                examples.append((n, block.size, s, ref))
    elapsed = time.perf_counter() - start
    assert mismatches == 0 and elapsed < 10, dict(mismatches=mismatches, examples=examples, seconds=elapsed)


# ------------------------------------------------------------------ 3


@pytest.mark.criterion(3, "AR(1) classification matrix")
def test_criterion_03_ar1_matrix():
    start = time.perf_counter()
    policy = NonparametricPolicy(1.0)
    part = sequential_blocks(2500, 50)
    designs = {"U(-1,1)": S, 0.99: S, 0.995: S, 0.999: S, 1.0: N, 1.00005: N, 1.05: N, 2.0: N}
    counts, failing = {}, []
    for rho, want in designs.items():
        verdicts = []
        for seed in range(20):
            r = np.random.default_rng(10_000 + seed).uniform(-1, 1) if rho == "U(-1,1)" else rho
            verdicts.append(detect_strict(gen_ar1(2500, r, seed), part, policy).verdict)
        counts[rho] = tally(verdicts)
        if sum(v is want for v in verdicts) < 16:
            failing.append(rho)
    elapsed = time.perf_counter() - start
    assert not failing and elapsed < 120, dict(failing=failing, counts=counts, seconds=elapsed)


# ------------------------------------------------------------------ 4


AR2_STATIONARY = [(0.3, 0.4), (0.4, 0.3), (0.4, 0.5), (0.5, 0.4)]
AR2_NONSTATIONARY = [(0.5, 0.9), (0.6, 0.6), (0.0, 1.0), (1.0, 0.0)]
# (1, 0) and (0.5, 0.5) are exempt for GARCH
GARCH_NONSTATIONARY = [(0.5, 0.6), (0.6, 0.6), (0.0, 1.0)]


@pytest.mark.criterion(4, "AR(2)/GARCH regimes")
def test_criterion_04_ar2_garch():
    start = time.perf_counter()
    policy = NonparametricPolicy(1.0)
    part = sequential_blocks(2500, 5)
    cases = [("ar2", ab, S) for ab in AR2_STATIONARY] + [("ar2", ab, N) for ab in AR2_NONSTATIONARY]
    cases += [("garch", ab, S) for ab in AR2_STATIONARY] + [("garch", ab, N) for ab in GARCH_NONSTATIONARY]
    counts, failing = {}, []
    for model, (a, b), want in cases:
        verdicts = []
        for seed in range(20):
            x = gen_ar2(2500, a, b, seed) if model == "ar2" else gen_garch11(2500, 1.0, a, b, seed)
            verdicts.append(detect_strict(x, part, policy).verdict)
        counts[f"{model}{(a, b)}"] = tally(verdicts)
        if sum(v is want for v in verdicts) < 16:
            failing.append(f"{model}{(a, b)}")
    elapsed = time.perf_counter() - start
    assert not failing and elapsed < 300, dict(failing=failing, counts=counts, seconds=elapsed)


# ------------------------------------------------------------------ 5


@pytest.mark.criterion(5, "TMCMC optimal-scaling acceptance rate")
def test_criterion_05_tmcmc_acceptance():
    start = time.perf_counter()
    rate = tmcmc_run_gaussian(TmcmcConfig(100, ell=2.4, seed=0), 100_000).acceptance_rate
    elapsed = time.perf_counter() - start
    assert abs(rate - 0.439) <= 0.03 and elapsed < 30, dict(rate=rate, seconds=elapsed)


# ------------------------------------------------------------------ 6


@pytest.mark.criterion(6, "TMCMC convergence diagnosis ordering")
def test_criterion_06_tmcmc_diagnosis():
    start = time.perf_counter()
    designs = {0.1: S, 2.4: S, 10.0: S, 0.001: N, 1000.0: N}
    counts, failing = {}, []
    for ell, want in designs.items():
        verdicts = [diagnose_convergence(tmcmc_run_gaussian(TmcmcConfig(100, ell=ell, seed=s), 100_000).first,
                                         500).verdict for s in range(5)]
        counts[ell] = tally(verdicts)
        if sum(v is want for v in verdicts) < 4:
            failing.append(ell)
    elapsed = time.perf_counter() - start
    assert not failing and elapsed < 120, dict(failing=failing, counts=counts, seconds=elapsed)


# ------------------------------------------------------------------ 7


def spatial_statistics(name, seed):
    locs, values = spatial_preset(name, 2000, seed)
    part = kmeans_partition(locs, 100, min_size=10, seed=seed)
    return values, part


@pytest.mark.criterion(7, "spatial strict stationarity with a calibrated C1")
def test_criterion_07_spatial():
    start = time.perf_counter()
    problems = {}
    bench = {name: spatial_statistics(name, 100) for name in ("spatial-stationary", "spatial-nonstationary")}
    try:
        c1 = calibrate_c1([block_statistics(*bench["spatial-stationary"])],
                          [block_statistics(*bench["spatial-nonstationary"])], "discriminating")
    except CalibrationError as exc:
        problems["calibration"] = str(exc)
        c1 = 0.89  # keep evaluating so the report shows the verdicts anyway
    policy = NonparametricPolicy(c1)
    counts = {}
    for name, want in (("spatial-stationary", S), ("spatial-nonstationary", N), ("spatial-mixture", N)):
        verdicts = [detect_strict(*spatial_statistics(name, s), policy).verdict for s in range(10)]
        counts[name] = tally(verdicts)
        if sum(v is want for v in verdicts) < 8:
            problems[name] = counts[name]
    elapsed = time.perf_counter() - start
    assert not problems and elapsed < 300, dict(c1=c1, problems=problems, counts=counts, seconds=elapsed)


# ------------------------------------------------------------------ 8


def pp_design(name, seed):
    if name == "hpp":
        return gen_hpp(1.0, Window(0, 50, 0, 50), seed)
    if name == "ihpp":
        return gen_ihpp(lambda x, y: 100 * (x + y), 1000.0, Window(0, 5, 0, 5), seed)
    return gen_cluster("matern", 10, 5, Window(0, 10, 0, 10), seed, radius=0.1)


def pp_benchmark_c1(stat_fn):
    """Discriminating C1 from one homogeneous and one inhomogeneous benchmark pattern."""
    stats = {}
    for name in ("hpp", "ihpp"):
        p = pp_design(name, 100)
        stats[name] = stat_fn(p, cluster_pattern(p, default_cluster_count(p.n), 100))
    return calibrate_c1([stats["hpp"]], [stats["ihpp"]], "discriminating")


@pytest.mark.criterion(8, "point-process suite (CSR, stationarity, Poisson independence)")
def test_criterion_08_point_processes():
    start = time.perf_counter()
    c1_csr = pp_benchmark_c1(csr_statistics)
    c1_stat = pp_benchmark_c1(lambda p, part: block_statistics(p.nn, part))
    expected = {
        "hpp": (S, S, S),
        "ihpp": (N, N, S),
        "matern": (N, S, N),
    }
    counts, failing = {}, []
    for name, wants in expected.items():
        got = ([], [], [])
        for seed in range(10):
            p = pp_design(name, seed)
            K = default_cluster_count(p.n)
            got[0].append(detect_csr(p, K, NonparametricPolicy(c1_csr), seed=seed).verdict)
            got[1].append(detect_pp_stationarity(p, K, NonparametricPolicy(c1_stat), seed=seed).verdict)
            got[2].append(detect_poisson(p, 50, NonparametricPolicy(0.5), seed=seed).verdict)
        for leg, verdicts, want in zip(("csr", "stationarity", "independence"), got, wants):
            counts[f"{name}/{leg}"] = tally(verdicts)
            if sum(v is want for v in verdicts) < 8:
                failing.append(f"{name}/{leg}")
    elapsed = time.perf_counter() - start
    assert not failing and elapsed < 600, dict(c1_csr=c1_csr, c1_stat=c1_stat, failing=failing,
                                               counts=counts, seconds=elapsed)


# ------------------------------------------------------------------ 9


@pytest.mark.criterion(9, "Dirichlet-process engine oracles")
def test_criterion_09_dp_oracles():
    start = time.perf_counter()
    rng = np.random.default_rng(9)
    independent = list(rng.standard_normal((10, 500)))
    x = rng.standard_normal(500)
    comonotone = [x.copy() for _ in range(10)]
    indep_gaps = independence_statistics(build_dp_model(independent))
    como_gaps = independence_statistics(build_dp_model(comonotone))

    t = np.full(10, 0.25)
    small, big = build_dp_model(independent, alpha=1e-8), build_dp_model(independent, alpha=1e8)
    empirical = float(np.all(small.data <= t, axis=1).mean())
    base = float(np.all(big.draws <= t, axis=1).mean())
    alpha_err = (abs(dp_joint_cdf(small, t) - empirical), abs(dp_joint_cdf(big, t) - base))
    elapsed = time.perf_counter() - start

    detail = dict(indep_max=float(indep_gaps.max()), como_min=float(como_gaps.min()), alpha_err=alpha_err,
                  seconds=elapsed)
    assert (indep_gaps.max() < 0.1 and como_gaps.min() > 0.2 and max(alpha_err) < 2e-2
            and elapsed < 60), detail


# ------------------------------------------------------------------ 10


@pytest.mark.criterion(10, "frequency recovery")
def test_criterion_10_frequency():
    start = time.perf_counter()
    problems = {}

    _, single = detect_frequencies(single_frequency_series(500, seed=0, sigma=5.0), FrequencyConfig(r=1000, M=50))
    if not (len(single) == 1 and 0.015 <= single[0].frequency <= 0.025):
        problems["single"] = [(f.frequency, f.bins) for f in single]

    _, multi = detect_frequencies(multiple_frequency_series(100), FrequencyConfig(r=1, M=50))
    got = sorted(f.frequency for f in multi)
    if not (len(got) == 3 and all(abs(g - w) <= 0.02 for g, w in zip(got, [0.06, 0.1, 0.4]))):
        problems["multiple"] = [(f.frequency, f.bins) for f in multi]

    _, long_run = detect_frequencies(single_frequency_series(500_000, seed=0, sigma=5.0),
                                     FrequencyConfig(r=1000, M=40), record_every=1000)
    if not (len(long_run) == 1 and abs(long_run[0].frequency - 0.02) <= 0.002):
        problems["long_run"] = [(f.frequency, f.bins) for f in long_run]
    elapsed = time.perf_counter() - start
    assert not problems and elapsed < 120, dict(problems=problems, seconds=elapsed)


# ------------------------------------------------------------------ 11


def _inputs(tmp):
    paths = {}
    for key, argv in {
        "series": ["--preset", "ar1", "--rho", "0.5", "--n", "2500"],
        "nonstat": ["--preset", "ar1", "--rho", "2", "--n", "2500"],
        "spatial": ["--preset", "spatial-stationary", "--n", "400"],
        "chain": ["--preset", "tmcmc-gaussian", "--n", "20000", "--d", "10"],
        "points": ["--preset", "matern"],
        "osc": ["--preset", "single-freq", "--n", "500"],
    }.items():
        paths[key] = tmp / f"{key}.csv"
        assert cli_main(["generate", *argv, "--seed", "5", "--out", str(paths[key])]) == 0
    return paths


def _runs(p):
    return {
        "generate": ["generate", "--preset", "lgcp"],
        "detect-stationarity": ["detect-stationarity", "--in", p["series"], "--blocks", "50"],
        "detect-stationarity-spatial": ["detect-stationarity", "--in", p["spatial"], "--spatial", "--K", "20"],
        "detect-covariance": ["detect-covariance", "--in", p["spatial"], "--K", "20", "--bands", "0,0.1,0.2"],
        "mcmc-diagnose": ["mcmc-diagnose", "--in", p["chain"], "--block", "500"],
        "detect-csr": ["detect-csr", "--in", p["points"]],
        "detect-poisson": ["detect-poisson", "--in", p["points"]],
        "detect-pp-stationarity": ["detect-pp-stationarity", "--in", p["points"]],
        "detect-frequency": ["detect-frequency", "--in", p["osc"], "--r", "1000"],
        "calibrate-c1": ["calibrate-c1", "--stationary", p["series"], "--nonstationary", p["nonstat"],
                         "--blocks", "50"],
    }


@pytest.mark.criterion(11, "byte-identical reports across thread counts")
def test_criterion_11_determinism(tmp_path):
    paths = _inputs(tmp_path)
    differing, codes = [], {}
    for name, argv in _runs(paths).items():
        outputs = []
        for threads in (1, 4, 8):
            for rep in range(2):
                out = tmp_path / f"{name}-{threads}-{rep}.out"
                code = cli_main([str(a) for a in argv] + ["--seed", "3", "--threads", str(threads),
                                                          "--out", str(out)])
                codes[name] = code
                outputs.append(out.read_bytes())
        if len(set(outputs)) != 1:
            differing.append(name)
    bad_codes = {k: c for k, c in codes.items() if c != 0}
    assert not differing and not bad_codes, dict(differing=differing, exit_codes=bad_codes)
    # the reports really are JSON documents carrying the seed
    report = json.loads((tmp_path / "detect-csr-1-0.out").read_text())
    assert report["seed"] == 3


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
