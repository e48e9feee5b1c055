"""Threshold sequences c_j that turn a block statistic into a 0/1 indicator.

Three policies are available:

* parametric: an AR(1) plug-in bound around a benchmark sequence;
* adaptive: the same, with a scale and offset nudged after every stage;
* nonparametric: ``C_j / log(j + 1)`` with ``C_j`` stepping by 0.05.

Each policy is a small frozen object. ``initial()`` gives the starting
:class:`BoundState` and ``advance(state, j, y_prev)`` returns the bound for
stage ``j`` together with the state to hand to the next stage.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import CalibrationError, InputError

LOGLOG_FLOOR_STAGE = 2
NEAR_UNIT = 0.99999


@dataclass(frozen=True)
class BoundState:
    policy: str
    j: int = 0
    C_hat: float = 1.0
    eps_hat: float = 0.0
    rho_hat: float | None = None


def ar1_mle(series: Sequence[float]) -> float:
    """Conditional least-squares AR(1) coefficient; 1 when undefined."""
    x = np.asarray(series, dtype=np.float64)
    if x.size < 2:
        raise InputError("need at least two observations")
    den = float(np.dot(x[:-1], x[:-1]))
    if den == 0.0 or not math.isfinite(den):
        return 1.0
    return float(np.dot(x[1:], x[:-1]) / den)


def _loglog(j: int) -> float:
    return math.log(math.log(j + 1))


def parametric_ar1_bound(j: int, c_tilde_j: float, rho_hat: float) -> float:
    if j < LOGLOG_FLOOR_STAGE:
        raise InputError("the log-log bound is defined from stage 2 on")
    return c_tilde_j + 1e6 * (NEAR_UNIT - abs(rho_hat)) / _loglog(j)


def adaptive_step(rho_hat: float) -> float:
    r = abs(rho_hat)
    if r > 0.9985:
        return 0.001
    if r > 0.9955:
        return 0.01
    return 0.05


def adaptive_ar1_bound(
    state: BoundState, j: int, c_tilde_j: float, y_prev: int | None
) -> tuple[float, BoundState]:
    """Bound at stage ``j`` after folding in the previous stage's indicator."""
    if state.rho_hat is None:
        raise InputError("adaptive bound needs rho_hat")
    if y_prev is not None:
        delta = adaptive_step(state.rho_hat)
        state = replace(
            state,
            C_hat=state.C_hat + 1.0,
            eps_hat=state.eps_hat + (delta if y_prev == 1 else -delta),
        )
    jj = max(j, LOGLOG_FLOOR_STAGE)
    c = c_tilde_j + state.C_hat * (NEAR_UNIT - abs(state.rho_hat) + state.eps_hat) / _loglog(jj)
    return c, replace(state, j=j)


def nonparametric_bound(
    state: BoundState, j: int, y_prev: int | None, step: float = 0.05
) -> tuple[float, BoundState]:
    if y_prev is not None:
        state = replace(state, C_hat=state.C_hat + (step if y_prev == 1 else -step))
    return state.C_hat / math.log(j + 1), replace(state, j=j)


# ------------------------------------------------------------------ policies


@dataclass(frozen=True)
class NonparametricPolicy:
    c1: float = 1.0
    step: float = 0.05
    name: str = field(default="nonparametric", init=False)

    def initial(self) -> BoundState:
        return BoundState(self.name, C_hat=self.c1)

    def advance(self, state, j, y_prev):
        return nonparametric_bound(state, j, y_prev, self.step)

    def describe(self) -> dict:
        return {"bound": self.name, "c1": self.c1, "step": self.step}


def _benchmark_at(c_tilde, j: int) -> float:
    if c_tilde is None:
        return 0.0
    return float(c_tilde[min(j, len(c_tilde)) - 1])


@dataclass(frozen=True)
class ParametricAR1Policy:
    rho_hat: float
    c_tilde: tuple[float, ...] | None = None
    name: str = field(default="parametric", init=False)

    def initial(self) -> BoundState:
        return BoundState(self.name, rho_hat=self.rho_hat)

    def advance(self, state, j, y_prev):
        jj = max(j, LOGLOG_FLOOR_STAGE)
        c = parametric_ar1_bound(jj, _benchmark_at(self.c_tilde, j), self.rho_hat)
        return c, replace(state, j=j)

    def describe(self) -> dict:
        return {"bound": self.name, "rho_hat": self.rho_hat}


@dataclass(frozen=True)
class AdaptiveAR1Policy:
    rho_hat: float
    c_tilde: tuple[float, ...] | None = None
    name: str = field(default="adaptive", init=False)

    def initial(self) -> BoundState:
        return BoundState(self.name, C_hat=1.0, eps_hat=0.0, rho_hat=self.rho_hat)

    def advance(self, state, j, y_prev):
        return adaptive_ar1_bound(state, j, _benchmark_at(self.c_tilde, j), y_prev)

    def describe(self) -> dict:
        return {"bound": self.name, "rho_hat": self.rho_hat}


def benchmark_c_tilde(n: int, K: int, seed: int, rho: float = NEAR_UNIT) -> tuple[float, ...]:
    """Block statistics of a near-unit-root AR(1) sample, used as c~_j."""
    from .detectors import block_statistics
    from .generators import gen_ar1
    from .partitioning import sequential_blocks

    x = gen_ar1(n * K, rho, seed)
    return tuple(block_statistics(x, sequential_blocks(n * K, n)).tolist())


# --------------------------------------------------------------- calibration

CALIBRATION_MODES = ("min_for_stationary", "max_for_nonstationary", "discriminating")


def default_grid() -> np.ndarray:
    return np.round(np.arange(1, 201) * 0.01, 2)


def calibrate_c1(
    stationary: Sequence[Sequence[float]] | None = None,
    nonstationary: Sequence[Sequence[float]] | None = None,
    mode: str = "min_for_stationary",
    grid: Sequence[float] | None = None,
    verdict_fn: Callable | None = None,
) -> float:
    """Pick C_1 for the nonparametric policy from benchmark statistics.

    ``stationary`` and ``nonstationary`` each hold one statistic sequence
    per band (a single sequence for strict stationarity). A stationary
    benchmark counts as recognised when every band is declared
    Stationary; a nonstationary one when any band is declared
    Nonstationary.
    """
    from .detectors import Verdict, run_indicator_chain, verdict

    if mode not in CALIBRATION_MODES:
        raise InputError(f"unknown calibration mode {mode!r}")
    grid = default_grid() if grid is None else np.asarray(grid, dtype=np.float64)
    if grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise InputError("grid must be nonempty and ascending")
    need_s = mode in ("min_for_stationary", "discriminating")
    need_n = mode in ("max_for_nonstationary", "discriminating")
    if need_s and not stationary:
        raise InputError("this mode needs stationary benchmark statistics")
    if need_n and not nonstationary:
        raise InputError("this mode needs nonstationary benchmark statistics")
    judge = verdict_fn or (lambda traj: verdict(traj))

    def verdicts(stats_list, c1):
        out = []
        for s in stats_list:
            chain = run_indicator_chain(np.asarray(s, dtype=np.float64), NonparametricPolicy(c1))
            out.append(judge(chain.post_mean))
        return out

    def ok(c1):
        good = True
        if need_s:
            good &= all(v is Verdict.STATIONARY for v in verdicts(stationary, c1))
        if need_n and good:
            good &= any(v is Verdict.NONSTATIONARY for v in verdicts(nonstationary, c1))
        return good

    order = grid[::-1] if mode == "max_for_nonstationary" else grid
    for c1 in order:
        if ok(float(c1)):
            return float(c1)
    raise CalibrationError(f"no grid value satisfies {mode}")
