import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bayesstat.errors import InputError
from bayesstat.frequency import (
    GEOMETRIC_LIMIT,
    INFINITE,
    ExtractedFrequency,
    FrequencyConfig,
    bin_assign,
    bin_assign_linear,
    extract_frequencies,
    logistic_transform,
    run_frequency_recursion,
    transformed_values,
)

PI2_6 = math.pi ** 2 / 6


def logit(z):
    return math.log(z / (1 - z))


# ---------------------------------------------------------------- transform and bins


@pytest.mark.parametrize("x,expected", [(0.0, 0.5), (1.0, 0.731059), (1000.0, 1.0), (-1000.0, 0.0)])
def test_logistic_values(x, expected):
    assert logistic_transform(np.array([x]))[0] == pytest.approx(expected, abs=1e-6)


def test_logistic_no_overflow_warning():
    with np.errstate(over="raise"):
        out = logistic_transform(np.array([-800.0, 800.0]))
    np.testing.assert_array_equal(out, [0.0, 1.0])


def test_uniform_bin_examples():
    bp = FrequencyConfig(M=10).breakpoints()
    assert bin_assign(0.95, bp) == 10
    assert bin_assign(0.0, bp) == 1
    assert bin_assign(bp[3], bp) == 3
    assert bin_assign(1.0, bp) == 10


def test_geometric_bins():
    bp = FrequencyConfig(M=INFINITE).breakpoints()
    assert bp.size == GEOMETRIC_LIMIT + 1
    assert bp[1] == 0.5 and bp[2] == 0.75
    assert bin_assign(0.6, bp) == 2
    assert bin_assign(0.5, bp) == 1


def test_out_of_range():
    bp = FrequencyConfig(M=5).breakpoints()
    with pytest.raises(InputError):
        bin_assign(1.01, bp)
    with pytest.raises(InputError):
        bin_assign(-1e-9, bp)


@pytest.mark.parametrize("kw", [dict(r=0), dict(multiplier=-1), dict(M=1), dict(M=2.5), dict(epsilon_group=-1)])
def test_config_validation(kw):
    with pytest.raises(InputError):
        FrequencyConfig(**kw)


@pytest.mark.parametrize("M", [2, 7, 50, INFINITE])
def test_binary_search_matches_linear_scan(M):
    bp = FrequencyConfig(M=M).breakpoints()
    rng = np.random.default_rng(0)
    z = np.concatenate([rng.random(100_000), bp, [0.0]])
    fast = bin_assign(z, bp)
    slow = np.array([bin_assign_linear(v, bp) for v in z])
    np.testing.assert_array_equal(fast, slow)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.integers(2, 100))
def test_every_value_in_exactly_one_bin(z, M):
    bp = FrequencyConfig(M=M).breakpoints()
    m = bin_assign(z, bp)
    owners = [k for k in range(1, M + 1) if bp[k - 1] < z <= bp[k] or (z == 0 and k == 1)]
    assert owners == [m]


def test_multiplier_after_power_keeps_bins():
    x = np.random.default_rng(1).normal(0, 3, 5000)
    plain = FrequencyConfig(r=10, M=20)
    scaled = FrequencyConfig(r=10, M=20, multiplier=10.0)
    a = bin_assign(transformed_values(x, plain), plain.breakpoints())
    b = bin_assign(transformed_values(x, scaled), scaled.breakpoints())
    np.testing.assert_array_equal(a, b)
    # scaling the raw series instead is a different transform
    c = bin_assign(transformed_values(10.0 * x, plain), plain.breakpoints())
    assert not np.array_equal(a, c)


def test_centering_flag():
    x = np.array([3.0, 5.0, 7.0])
    np.testing.assert_allclose(transformed_values(x, FrequencyConfig(center=True)), logistic_transform(x - 5.0))


# ---------------------------------------------------------------- recursion


def test_two_bin_cycle_converges_to_half():
    x = np.array([logit(0.15), logit(0.45)] * 5000)
    traj = run_frequency_recursion(x, FrequencyConfig(M=10))
    k = x.size
    bound = (PI2_6 + 10 * PI2_6) / k
    assert abs(traj.final_means[1] - 0.5) <= bound
    assert abs(traj.final_means[4] - 0.5) <= bound
    assert np.all(traj.final_means[[0, 2, 3, 5, 6, 7, 8, 9]] <= bound)


def test_periodic_series_error_bound_every_period():
    # period of 5 hitting bins 2, 2, 4, 7, 7
    cycle = [logit(0.15), logit(0.12), logit(0.35), logit(0.65), logit(0.69)]
    limits = np.zeros(10)
    limits[[1, 3, 6]] = [0.4, 0.2, 0.4]
    x = np.array(cycle * 400)
    traj = run_frequency_recursion(x, FrequencyConfig(M=10), record_every=5)
    for k, means in zip(traj.stages, traj.means):
        assert np.all(np.abs(means - limits) <= (PI2_6 + 10 * PI2_6) / k)


def test_closed_form_first_stages():
    x = np.array([logit(0.15), logit(0.45)])
    traj = run_frequency_recursion(x, FrequencyConfig(M=10))
    mass1 = 1.0
    np.testing.assert_allclose(traj.means[0, 1], (mass1 + 1) / (10 * mass1 + 1))
    mass2 = 1.25
    np.testing.assert_allclose(traj.means[1, 4], (mass2 + 1) / (10 * mass2 + 2))
    a, total = mass2 + 1, 10 * mass2 + 2
    np.testing.assert_allclose(traj.variances[1, 4], a * (total - a) / (total ** 2 * (total + 1)))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 400), st.sampled_from([2, 10, 50, INFINITE]))
def test_means_sum_to_one(seed, T, M):
    x = np.random.default_rng(seed).normal(0, 4, T)
    traj = run_frequency_recursion(x, FrequencyConfig(M=M))
    sums = traj.means.sum(axis=1)
    if M == INFINITE:
        # base mass beyond the last resolvable bin
        k = traj.stages.astype(float)
        mass = np.cumsum(1 / np.arange(1, T + 1) ** 2)[traj.stages - 1]
        sums = sums + mass * 2.0 ** -GEOMETRIC_LIMIT / (mass + k)
    np.testing.assert_allclose(sums, 1.0, atol=1e-10)


def test_thinned_trajectory_is_subsample():
    x = np.random.default_rng(2).normal(0, 2, 103)
    full = run_frequency_recursion(x, FrequencyConfig(M=8))
    thin = run_frequency_recursion(x, FrequencyConfig(M=8), record_every=10)
    assert thin.stages[-1] == 103
    np.testing.assert_array_equal(thin.means, full.means[thin.stages - 1])


def test_short_series_rejected():
    with pytest.raises(InputError):
        run_frequency_recursion([1.0], FrequencyConfig())
    with pytest.raises(InputError):
        run_frequency_recursion([1.0, 2.0], FrequencyConfig(), record_every=0)


# ---------------------------------------------------------------- extraction


def test_single_bin_above_threshold():
    means = [0.9, 0.001, 0.08, 0.001, 0.001]
    assert extract_frequencies(means, 0.005) == [ExtractedFrequency(0.08, (3,))]


def test_all_mass_in_first_bin():
    assert extract_frequencies([1.0, 0.0, 0.0], 0.005) == []


def test_grouping_consecutive_runs():
    means = [0.5, 0.1, 0.05, 0.0, 0.2, 0.0, 0.1, 0.05]
    got = extract_frequencies(means, 0.005)
    assert [g.bins for g in got] == [(2, 3), (5,), (7, 8)]
    assert [g.frequency for g in got] == pytest.approx([0.15, 0.2, 0.15])
