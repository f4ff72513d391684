import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpme.errors import FitError
from wpme.exact import BarenblattParams
from wpme.rates import (fit_exp, fit_power, local_exponents, predicted_exp_rate,
                        predicted_smoothing_exponent, predicted_zero_mean_exponent,
                        reference_exponent_bg05, synthesize_power)


def test_smoothing_exponent_examples():
    assert predicted_smoothing_exponent(1, 2, 3) == pytest.approx(3 / 5)
    assert predicted_smoothing_exponent(1, 2, 3) == pytest.approx(BarenblattParams("nd_radial", 2.0, 1.0, N=3).lam)
    for N in (3, 4, 7):
        for q0, m in ((1, 2), (2.5, 1.3)):
            assert predicted_smoothing_exponent(q0, m, N / (N - 2)) == pytest.approx(N / (2 * q0 + N * (m - 1)))
    assert predicted_smoothing_exponent(2, 3, math.inf) == pytest.approx(1 / 4)
    with pytest.raises(ValueError):
        predicted_smoothing_exponent(0.5, 2, 3)
    with pytest.raises(ValueError):
        predicted_smoothing_exponent(1, 2, 1)


@given(st.floats(1, 50), st.floats(0.01, 10), st.floats(1.01, 6), st.floats(1.01, 50))
def test_smoothing_exponent_decreasing_in_q0(q0, dq, m, sigma):
    assert predicted_smoothing_exponent(q0 + dq, m, sigma) < predicted_smoothing_exponent(q0, m, sigma)


def test_smoothing_exponent_limits():
    vals = [predicted_smoothing_exponent(q0, 2.0, 3.0) for q0 in (1e1, 1e2, 1e3, 1e4)]
    assert np.all(np.diff(vals) < 0) and vals[-1] < 1e-3
    q0, sigma = 2.0, 3.0
    limit = sigma / ((sigma - 1) * q0)
    gaps = [abs(predicted_smoothing_exponent(q0, 1 + eps, sigma) - limit) for eps in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert np.all(np.diff(gaps) < 0) and gaps[-1] < 1e-3


def test_zero_mean_and_exp_rates():
    assert predicted_zero_mean_exponent(2) == 1.0
    assert predicted_zero_mean_exponent(3) == 0.5
    assert predicted_zero_mean_exponent(1.0001) > 1e3
    with pytest.raises(ValueError):
        predicted_zero_mean_exponent(1.0)
    assert predicted_exp_rate(2, math.pi ** 2, 1.0) == pytest.approx(2 * math.pi ** 2)
    assert predicted_exp_rate(2, 2 * 3.0, 0.7) == pytest.approx(2 * predicted_exp_rate(2, 3.0, 0.7))
    for m in (1.5, 2, 4):
        assert predicted_exp_rate(m, 3.0, 1.0) == pytest.approx(m * 3.0)
    assert predicted_exp_rate(3, 1.0, -2.0) == pytest.approx(12.0)
    with pytest.raises(ValueError):
        predicted_exp_rate(2, 1.0, 0.0)


def test_bg05_examples():
    assert reference_exponent_bg05(1, 2, 3) == pytest.approx(1 - 0.5 ** 1.5)
    assert reference_exponent_bg05(1, 2, 3) > 0.6
    assert reference_exponent_bg05(1e6, 2, 3) < 1e-5
    with pytest.raises(ValueError):
        reference_exponent_bg05(1, 2, 2)


@given(st.floats(1, 100), st.floats(1.001, 10), st.integers(3, 12))
def test_bg05_in_unit_interval_and_beaten(q0, m, N):
    a = reference_exponent_bg05(q0, m, N)
    assert 0 < a < 1
    # the sharp bound decays like t^-(sharp) with sharp = predicted; the earlier one like t^-(a/(m-1))
    assert a > (m - 1) * predicted_smoothing_exponent(q0, m, N / (N - 2))


def test_fit_power_examples():
    t = np.geomspace(1e-3, 1e2, 40)
    f = fit_power(t, t ** -0.6)
    assert f.exponent == pytest.approx(0.6, abs=1e-12) and f.r_squared == pytest.approx(1.0)
    f = fit_power(t, 3.0 / t)
    assert f.exponent == pytest.approx(1.0, abs=1e-12) and f.log_prefactor == pytest.approx(math.log(3.0))
    rng = np.random.default_rng(0)
    noisy = t ** -0.6 * (1 + 0.01 * rng.uniform(-1, 1, t.size))
    f = fit_power(t, noisy)
    assert abs(f.exponent - 0.6) <= 0.02 and f.r_squared >= 0.99
    f = fit_power(t, t ** -0.6, window=(1e-2, 1.0))
    assert f.window == (1e-2, 1.0) and f.points == np.sum((t >= 1e-2) & (t <= 1.0))


def test_fit_errors():
    t = np.linspace(1, 2, 10)
    with pytest.raises(FitError):
        fit_power(t, np.where(t > 1.5, -1.0, 1.0))
    with pytest.raises(FitError):
        fit_power(t[:4], t[:4])
    with pytest.raises(FitError):
        fit_exp(t, np.zeros(10))
    with pytest.raises(FitError):
        fit_power(np.linspace(0, 1, 10), np.ones(10))


def test_fit_exp_examples():
    t = np.linspace(0, 2, 50)
    f = fit_exp(t, np.exp(-5 * t))
    assert f.rate == pytest.approx(5.0, abs=1e-12)
    f = fit_exp(t, 2 * np.exp(-math.pi * t))
    assert f.rate == pytest.approx(math.pi) and f.prefactor == pytest.approx(2.0)
    t = np.linspace(0, 6, 200)
    two_mode = np.exp(-5 * t) + 0.01 * np.exp(-t)
    f = fit_exp(t, two_mode)
    assert 1 < f.rate < 5 and f.r_squared < 0.999


@given(st.floats(0.01, 5.0), st.floats(0.1, 10.0))
def test_power_round_trip(p, c):
    t = np.geomspace(1e-2, 1e3, 30)
    f = fit_power(t, synthesize_power(t, p, c))
    assert f.exponent == pytest.approx(p, abs=1e-12)


def test_local_exponents():
    t = np.geomspace(1, 100, 11)
    assert np.allclose(local_exponents(t, t ** -0.75), 0.75)
