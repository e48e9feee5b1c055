"""Command-line front end.

Every detection subcommand writes a JSON report (``--out``, default
stdout) and, with ``--trajectory``, a plot-ready CSV of the stage-wise
posterior. Exit codes: 0 success, 2 bad input or usage, 3 calibration
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    AdaptiveAR1Policy,
    NonparametricPolicy,
    ParametricAR1Policy,
    ar1_mle,
    benchmark_c_tilde,
    calibrate_c1,
    CALIBRATION_MODES,
)
from .detectors import DetectionReport, VerdictRule, block_statistics, detect_covariance, detect_strict, verdict
from .errors import BayesStatError, CalibrationError, InputError
from .partitioning import kmeans_partition, sequential_blocks

THREADS_ENV = "BAYESSTAT_THREADS"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CALIBRATION = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# ------------------------------------------------------------------ I/O


def _read_table(path) -> tuple[list[str] | None, np.ndarray]:
    """Numeric CSV with an optional header row; ``#`` lines are comments."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    rows = [r for r in csv.reader(line for line in text.splitlines() if line.strip() and not line.startswith("#"))]
    if not rows:
        raise InputError(f"{path} holds no data")
    header = None
    try:
        [float(v) for v in rows[0]]
    except ValueError:
        header = [h.strip().lower() for h in rows[0]]
        rows = rows[1:]
    try:
        data = np.array([[float(v) for v in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise InputError(f"non-numeric value in {path}") from exc
    if data.ndim != 2 or data.size == 0:
        raise InputError(f"{path} holds no data")
    return header, data


def _column(header, data, name, fallback):
    if header is not None and name in header:
        return data[:, header.index(name)]
    return data[:, fallback]


def read_series(path) -> np.ndarray:
    header, data = _read_table(path)
    return _column(header, data, "value", -1)


def read_spatial(path) -> tuple[np.ndarray, np.ndarray]:
    """``x,y,value`` or ``x,y,t,value``; locations include ``t`` when present."""
    header, data = _read_table(path)
    if data.shape[1] < 3:
        raise InputError("spatial input needs x, y and value columns")
    if header is not None:
        coords = [c for c in ("x", "y", "t") if c in header]
        if "value" not in header or len(coords) < 2:
            raise InputError("spatial header must name x, y[, t] and value")
        locs = np.column_stack([data[:, header.index(c)] for c in coords])
        return locs, data[:, header.index("value")]
    return data[:, :-1], data[:, -1]


def _write_text(path, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _trajectory_csv(report: DetectionReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "s", "c", "y", "post_mean", "post_var"])
    for st in report.chain.stages():
        w.writerow([st["j"], repr(st["s"]), repr(st["c"]), st["y"], repr(st["post_mean"]), repr(st["post_var"])])
    return buf.getvalue()


def _emit(args, report: DetectionReport, extra: dict | None = None) -> None:
    payload = report.to_dict()
    payload["config"]["subcommand"] = args.command
    if extra:
        payload.update(extra)
    _write_text(args.out, _dump_json(payload))
    if getattr(args, "trajectory", None):
        _write_text(args.trajectory, _trajectory_csv(report))


def _write_csv(path, header, columns) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow([repr(float(v)) for v in row])
    _write_text(path, buf.getvalue())


# ------------------------------------------------------------ common flags


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise InputError(f"{THREADS_ENV} must be an integer") from exc
    return os.cpu_count() or 1


def _add_common(p, seed_required: bool = False):
    p.add_argument("--out", default=None, help="report path (default stdout)")
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default ${THREADS_ENV} or all cores)")
    p.add_argument("--seed", type=int, required=seed_required, default=None if seed_required else 0)


def _add_policy(p, default_c1: float = 1.0):
    p.add_argument("--bound", choices=("nonparametric", "parametric", "adaptive"), default="nonparametric")
    p.add_argument("--c1", type=float, default=default_c1)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--rho-hat", type=float, default=None,
                   help="AR(1) coefficient for parametric bounds (estimated when omitted)")
    p.add_argument("--theta-hi", type=float, default=0.8)
    p.add_argument("--theta-lo", type=float, default=0.2)
    p.add_argument("--tail", type=float, default=0.2)
    p.add_argument("--trajectory", default=None, help="stage-wise CSV output")


def _rule(args) -> VerdictRule:
    return VerdictRule(args.theta_hi, args.theta_lo, args.tail)


def _policy(args, series=None, block: int | None = None, K: int | None = None):
    if args.bound == "nonparametric":
        return NonparametricPolicy(args.c1, args.step)
    rho = args.rho_hat
    if rho is None:
        if series is None:
            raise InputError("parametric bounds need --rho-hat for this input")
        rho = ar1_mle(series)
    c_tilde = None
    if block is not None and K is not None:
        c_tilde = benchmark_c_tilde(block, K, args.seed)
    cls = ParametricAR1Policy if args.bound == "parametric" else AdaptiveAR1Policy
    return cls(rho, c_tilde)


# ---------------------------------------------------------------- generate

TS_PRESETS = ("ar1", "ar2", "arch", "garch")
SPATIAL_PRESETS = ("spatial-stationary", "spatial-nonstationary", "spatial-mixture", "spatial-whittle")
SPACETIME_PRESETS = ("spacetime-s1", "spacetime-s2", "spacetime-ns1", "spacetime-ns2", "spacetime-ns3")
PP_PRESETS = ("hpp", "ihpp", "matern", "thomas", "neyman-scott", "strauss", "lgcp")
FREQ_PRESETS = ("single-freq", "mult-freq")
MCMC_PRESETS = ("tmcmc-gaussian",)
ALL_PRESETS = TS_PRESETS + SPATIAL_PRESETS + SPACETIME_PRESETS + PP_PRESETS + FREQ_PRESETS + MCMC_PRESETS


def _generate(args) -> int:
    from . import generators as g
    from .generators import presets

    name, seed = args.preset, args.seed
    if name in TS_PRESETS:
        if name == "ar1":
            x = g.gen_ar1(args.n, args.rho, seed)
        elif name == "ar2":
            x = g.gen_ar2(args.n, args.alpha, args.beta, seed)
        elif name == "arch":
            x = g.gen_arch1(args.n, args.omega, args.alpha, seed)
        else:
            x = g.gen_garch11(args.n, args.omega, args.alpha, args.beta, seed)
        _write_csv(args.out, ["value"], [x])
    elif name in FREQ_PRESETS:
        from .frequency import multiple_frequency_series, single_frequency_series

        x = single_frequency_series(args.n, seed) if name == "single-freq" else multiple_frequency_series(args.n)
        _write_csv(args.out, ["value"], [x])
    elif name in MCMC_PRESETS:
        from .tmcmc import TmcmcConfig, tmcmc_run_gaussian

        chain = tmcmc_run_gaussian(TmcmcConfig(args.d, args.ell, seed=seed), args.n)
        _write_csv(args.out, ["value"], [chain.first])
    elif name in SPATIAL_PRESETS:
        locs, values = presets.spatial_preset(name, args.n, seed, args.p)
        _write_csv(args.out, ["x", "y", "value"], [locs[:, 0], locs[:, 1], values])
    elif name in SPACETIME_PRESETS:
        model = name.split("-", 1)[1].upper()
        locs, field = presets.spacetime_preset(model, args.n, args.T, seed)
        T, m = field.shape
        xs = np.tile(locs[:, 0], T)
        ys = np.tile(locs[:, 1], T)
        ts = np.repeat(np.arange(1, T + 1, dtype=np.float64), m)
        _write_csv(args.out, ["x", "y", "t", "value"], [xs, ys, ts, field.ravel()])
    else:
        pattern = _pp_preset(name, seed)
        from .point_process import write_pattern

        if args.out is None or args.out == "-":
            raise InputError("point-pattern presets need --out")
        write_pattern(pattern, args.out)
    return EXIT_OK


def _pp_preset(name, seed):
    from .generators import Matern
    from .point_process import Window, gen_cluster, gen_hpp, gen_ihpp, gen_lgcp, gen_strauss

    if name == "hpp":
        return gen_hpp(1.0, Window(0, 50, 0, 50), seed)
    if name == "ihpp":
        return gen_ihpp(lambda x, y: 100 * (x + y), 1000.0, Window(0, 5, 0, 5), seed)
    if name == "matern":
        return gen_cluster("matern", 10, 5, Window(0, 10, 0, 10), seed, radius=0.1)
    if name == "thomas":
        return gen_cluster("thomas", 10, 5, Window(0, 10, 0, 10), seed, sigma2=0.01)
    if name == "neyman-scott":
        return gen_cluster("neyman_scott", 10, 5, Window(0, 10, 0, 10), seed, radius=0.1, m_fixed=5)
    if name == "strauss":
        return gen_strauss(100, 0.7, 0.05, Window(0, 1, 0, 1), seed)
    return gen_lgcp(3.0, Matern(0.2, 10.0, 0.5), 64, Window(0, 15, 0, 20), seed)


# --------------------------------------------------------------- detectors


def _spatial_partition(args, locs):
    return kmeans_partition(locs, args.K, min_size=args.min_size, seed=args.seed,
                            standardize=args.standardize)


def _detect_stationarity(args) -> int:
    threads = _threads(args)
    if args.spatial:
        locs, values = read_spatial(args.input)
        partition = _spatial_partition(args, locs)
        policy = _policy(args, values)
    else:
        values = read_series(args.input)
        if args.blocks is None:
            raise InputError("time series input needs --blocks")
        partition = sequential_blocks(values.size, args.blocks)
        policy = _policy(args, values, args.blocks, partition.K)
    report = detect_strict(values, partition, policy, _rule(args), exact=args.exact, threads=threads)
    report.seed = args.seed
    report.config["input"] = os.path.basename(args.input)
    _emit(args, report)
    return EXIT_OK


def _parse_bands(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InputError("--bands must be comma-separated numbers") from exc


def _detect_covariance(args) -> int:
    locs, values = read_spatial(args.input)
    partition = _spatial_partition(args, locs)
    per_band, overall = detect_covariance(values, locs, partition, _parse_bands(args.bands),
                                          _policy(args, values), _rule(args))
    overall.seed = args.seed
    overall.config["input"] = os.path.basename(args.input)
    _write_text(args.out, _dump_json({**overall.to_dict(), "config": {**overall.config, "subcommand": args.command}}))
    if args.trajectory:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["h_lo", "h_hi", "j", "s", "c", "y", "post_mean", "post_var"])
        for r in per_band:
            for st in r.chain.stages():
                w.writerow([repr(r.config["h_lo"]), repr(r.config["h_hi"]), st["j"], repr(st["s"]),
                            repr(st["c"]), st["y"], repr(st["post_mean"]), repr(st["post_var"])])
        _write_text(args.trajectory, buf.getvalue())
    return EXIT_OK


def _mcmc_diagnose(args) -> int:
    from .tmcmc import TmcmcConfig, diagnose_convergence, tmcmc_run_gaussian

    extra = {}
    if args.input:
        chain = read_series(args.input)
    else:
        run = tmcmc_run_gaussian(TmcmcConfig(args.d, args.ell, seed=args.seed), args.iters)
        chain = run.first
        extra["acceptance_rate"] = run.acceptance_rate
    report = diagnose_convergence(chain, args.block, _policy(args, chain), _rule(args), exact=args.exact)
    report.seed = args.seed
    report.config.update({"d": args.d, "ell": args.ell, "iters": args.iters} if not args.input
                         else {"input": os.path.basename(args.input)})
    _emit(args, report, extra)
    return EXIT_OK


def _read_pattern(path):
    from .point_process import read_pattern

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        pattern = read_pattern(path)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return pattern


def _cluster_count(args, pattern) -> int:
    from .point_process import default_cluster_count

    return default_cluster_count(pattern.n) if args.K is None else args.K


def _detect_csr(args) -> int:
    from .point_process import detect_csr

    pattern = _read_pattern(args.input)
    report = detect_csr(pattern, _cluster_count(args, pattern), _policy(args), args.seed, _rule(args))
    report.config["conclusion"] = {"Stationary": "CSR", "Nonstationary": "not CSR"}.get(report.verdict.value,
                                                                                        "inconclusive")
    report.config["input"] = os.path.basename(args.input)
    _emit(args, report)
    return EXIT_OK


def _detect_poisson(args) -> int:
    from .dp_independence import detect_poisson

    report = detect_poisson(_read_pattern(args.input), args.K, _policy(args), args.alpha, args.seed,
                            args.matching, _rule(args))
    report.config["input"] = os.path.basename(args.input)
    _emit(args, report)
    return EXIT_OK


def _detect_pp_stationarity(args) -> int:
    from .point_process import detect_pp_stationarity

    pattern = _read_pattern(args.input)
    report = detect_pp_stationarity(pattern, _cluster_count(args, pattern), _policy(args), args.seed,
                                    _rule(args), exact=args.exact)
    report.config["input"] = os.path.basename(args.input)
    _emit(args, report)
    return EXIT_OK


def _parse_M(text: str) -> float:
    if text.lower() in ("inf", "infinite", "infinity"):
        return math.inf
    try:
        return int(text)
    except ValueError as exc:
        raise InputError("--M must be an integer or 'inf'") from exc


def _detect_frequency(args) -> int:
    from .frequency import FrequencyConfig, detect_frequencies

    series = read_series(args.input)
    cfg = FrequencyConfig(args.r, args.multiplier, _parse_M(args.M), args.epsilon, args.center)
    traj, freqs = detect_frequencies(series, cfg, args.record_every)
    report = {
        "frequencies": [{"frequency": f.frequency, "bins": list(f.bins)} for f in freqs],
        "final_means": traj.final_means.tolist(),
        "config": {"r": cfg.r, "multiplier": cfg.multiplier, "M": "inf" if cfg.infinite else int(cfg.M),
                   "epsilon_group": cfg.epsilon_group, "center": cfg.center, "record_every": args.record_every,
                   "input": os.path.basename(args.input), "subcommand": args.command},
        "seed": args.seed,
        "version": __version__,
    }
    _write_text(args.out, _dump_json(report))
    if args.trajectory:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["stage", "bin", "posterior_mean", "posterior_variance"])
        for i, k in enumerate(traj.stages):
            for m in range(traj.means.shape[1]):
                w.writerow([int(k), m + 1, repr(float(traj.means[i, m])), repr(float(traj.variances[i, m]))])
        _write_text(args.trajectory, buf.getvalue())
    return EXIT_OK


def _calibrate(args) -> int:
    def stats_for(path):
        if args.spatial:
            locs, values = read_spatial(path)
            part = _spatial_partition(args, locs)
        else:
            values = read_series(path)
            if args.blocks is None:
                raise InputError("time series input needs --blocks")
            part = sequential_blocks(values.size, args.blocks)
        return block_statistics(values, part, exact=args.exact, threads=_threads(args))

    stationary = [stats_for(p) for p in args.stationary or []]
    nonstationary = [stats_for(p) for p in args.nonstationary or []]
    c1 = calibrate_c1(stationary or None, nonstationary or None, args.mode,
                      verdict_fn=lambda traj: verdict(traj, args.theta_hi, args.theta_lo, args.tail))
    report = {"c1": c1, "config": {"mode": args.mode, "stationary": [os.path.basename(p) for p in args.stationary or []],
                                   "nonstationary": [os.path.basename(p) for p in args.nonstationary or []],
                                   "subcommand": args.command},
              "seed": args.seed, "version": __version__}
    _write_text(args.out, _dump_json(report))
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bayesstat", description="Recursive Bayesian characterization of stochastic processes")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="simulate a preset design")
    p.add_argument("--preset", choices=ALL_PRESETS, required=True)
    _add_common(p, seed_required=True)
    p.add_argument("--n", type=int, default=2500, help="length, number of points or chain iterations")
    p.add_argument("--T", type=int, default=100, help="time points for space-time presets")
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--alpha", type=float, default=0.3)
    p.add_argument("--beta", type=float, default=0.4)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--p", type=float, default=0.99, help="mixture weight for spatial-mixture")
    p.add_argument("--d", type=int, default=100)
    p.add_argument("--ell", type=float, default=2.4)
    p.set_defaults(func=_generate)

    def spatial_flags(q, default_K=100, default_min=10):
        q.add_argument("--K", type=int, default=default_K)
        q.add_argument("--min-size", type=int, default=default_min)
        q.add_argument("--standardize", action="store_true", help="standardize coordinates before K-means")

    p = sub.add_parser("detect-stationarity", help="strict stationarity of a series or field")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--blocks", type=int, default=None, help="block size for time series")
    p.add_argument("--spatial", action="store_true", help="input has x,y[,t],value columns")
    p.add_argument("--exact", action="store_true", help="exact two-sample sup instead of the shortcut")
    spatial_flags(p)
    _add_common(p)
    _add_policy(p)
    p.set_defaults(func=_detect_stationarity)

    p = sub.add_parser("detect-covariance", help="covariance stationarity of a spatial field")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--bands", default="0,0.02,0.03,0.04")
    spatial_flags(p)
    _add_common(p)
    _add_policy(p)
    p.set_defaults(func=_detect_covariance)

    p = sub.add_parser("mcmc-diagnose", help="convergence of an MCMC chain")
    p.add_argument("--in", dest="input", default=None, help="chain CSV; omit to run TMCMC on N(0, I_d)")
    p.add_argument("--block", type=int, default=500)
    p.add_argument("--d", type=int, default=100)
    p.add_argument("--ell", type=float, default=2.4)
    p.add_argument("--iters", type=int, default=100_000)
    p.add_argument("--exact", action="store_true")
    _add_common(p)
    _add_policy(p)
    p.set_defaults(func=_mcmc_diagnose)

    for name, func, K, c1, helptext in (
        ("detect-csr", _detect_csr, None, 0.18, "complete spatial randomness"),
        ("detect-poisson", _detect_poisson, 50, 0.5, "Poisson characterization via mutual independence"),
        ("detect-pp-stationarity", _detect_pp_stationarity, None, 0.18, "stationarity of a point pattern"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--K", type=int, default=K,
                       help="number of clusters" + (" (default: one per ten points)" if K is None else ""))
        if name == "detect-poisson":
            p.add_argument("--alpha", type=float, default=1.0)
            p.add_argument("--matching", choices=("sorted", "random"), default="sorted")
        if name == "detect-pp-stationarity":
            p.add_argument("--exact", action="store_true")
        _add_common(p)
        _add_policy(p, default_c1=c1)
        p.set_defaults(func=func)

    p = sub.add_parser("detect-frequency", help="oscillation frequencies")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--M", default="50", help="bin count or 'inf'")
    p.add_argument("--multiplier", type=float, default=1.0)
    p.add_argument("--epsilon", type=float, default=0.005)
    p.add_argument("--center", action="store_true")
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--trajectory", default=None)
    _add_common(p)
    p.set_defaults(func=_detect_frequency)

    p = sub.add_parser("calibrate-c1", help="choose C1 from benchmark data sets")
    p.add_argument("--stationary", nargs="*", default=None)
    p.add_argument("--nonstationary", nargs="*", default=None)
    p.add_argument("--mode", choices=CALIBRATION_MODES, default="discriminating")
    p.add_argument("--blocks", type=int, default=None)
    p.add_argument("--spatial", action="store_true")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--theta-hi", type=float, default=0.8)
    p.add_argument("--theta-lo", type=float, default=0.2)
    p.add_argument("--tail", type=float, default=0.2)
    spatial_flags(p)
    _add_common(p)
    p.set_defaults(func=_calibrate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr, end="")
        return EXIT_INPUT
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CalibrationError as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION
    except (BayesStatError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
