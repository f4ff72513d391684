"""Predicted exponents and least-squares fits of power-law / exponential decay."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import FitError

# a fit takes part in acceptance only above this r^2
GOODNESS_GATE = 0.995


@dataclass
class RateFit:
    """``v ~ exp(log_prefactor) * t^-exponent`` over ``window``."""

    exponent: float
    log_prefactor: float
    r_squared: float
    window: tuple
    points: int = 0

    def as_dict(self) -> dict:
        return {"exponent": self.exponent, "log_prefactor": self.log_prefactor,
                "r_squared": self.r_squared, "window": list(self.window), "points": self.points}


@dataclass
class ExpFit:
    """``v ~ prefactor * exp(-rate t)`` over ``window``."""

    rate: float
    prefactor: float
    r_squared: float
    window: tuple
    points: int = 0

    def as_dict(self) -> dict:
        return {"rate": self.rate, "prefactor": self.prefactor,
                "r_squared": self.r_squared, "window": list(self.window), "points": self.points}


def _check(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def predicted_smoothing_exponent(q0: float, m: float, sigma: float) -> float:
    """Time exponent sigma / ((sigma-1) q0 + sigma (m-1)) of the L^q0 -> L^inf bound.

    ``sigma = inf`` is allowed and gives the limit 1 / (q0 + m - 1).
    """
    _check(q0 >= 1 and m > 1 and sigma > 1, "need q0 >= 1, m > 1, sigma > 1")
    if math.isinf(sigma):
        return 1.0 / (q0 + m - 1.0)
    return sigma / ((sigma - 1.0) * q0 + sigma * (m - 1.0))


def predicted_zero_mean_exponent(m: float) -> float:
    _check(m > 1, "need m > 1")
    return 1.0 / (m - 1.0)


def predicted_exp_rate(m: float, lambda1: float, mean_value: float) -> float:
    """Linearised rate ``m lambda1 |mean|^(m-1)`` of convergence to the mean."""
    _check(m > 1 and lambda1 > 0, "need m > 1 and lambda1 > 0")
    _check(mean_value != 0, "the exponential rate needs a nonzero mean")
    return m * lambda1 * abs(mean_value) ** (m - 1.0)


def reference_exponent_bg05(q0: float, m: float, N: int) -> float:
    """Earlier smoothing exponent ``alpha = 1 - (q0/(q0+m-1))^(N/2)``.

    The earlier bound decays like ``t^(-alpha/(m-1))``; compare ``alpha`` with
    ``(m-1) * predicted_smoothing_exponent(q0, m, N/(N-2))``.
    """
    _check(q0 >= 1 and m > 1 and N > 2, "need q0 >= 1, m > 1, N > 2")
    return 1.0 - (q0 / (q0 + m - 1.0)) ** (0.5 * N)


def _window_mask(t, window):
    lo, hi = window
    return (t >= lo) & (t <= hi)


def _linfit(x, y):
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + icpt)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(icpt), min(max(r2, 0.0), 1.0)


def _prepare(times, values, window, min_points=5):
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if window is None:
        window = (float(t.min()), float(t.max()))
    sel = _window_mask(t, window)
    if sel.sum() < min_points:
        raise FitError(f"only {int(sel.sum())} points in window {window}; need {min_points}")
    if np.any(v[sel] <= 0) or not np.all(np.isfinite(v[sel])):
        raise FitError("fit values must be positive and finite inside the window")
    return t[sel], v[sel], (float(window[0]), float(window[1]))


def fit_power(times: Sequence[float], values: Sequence[float],
              window: Optional[tuple] = None) -> RateFit:
    t, v, window = _prepare(times, values, window)
    if np.any(t <= 0):
        raise FitError("power fits need t > 0")
    slope, icpt, r2 = _linfit(np.log(t), np.log(v))
    return RateFit(-slope, icpt, r2, window, t.size)


def fit_exp(times: Sequence[float], values: Sequence[float],
            window: Optional[tuple] = None) -> ExpFit:
    t, v, window = _prepare(times, values, window)
    slope, icpt, r2 = _linfit(t, np.log(v))
    return ExpFit(-slope, math.exp(icpt), r2, window, t.size)


def synthesize_power(times, exponent: float, prefactor: float = 1.0) -> np.ndarray:
    return prefactor * np.asarray(times, dtype=float) ** (-exponent)


def local_exponents(times, values) -> np.ndarray:
    """Slopes ``-d log v / d log t`` between consecutive samples."""
    t = np.log(np.asarray(times, dtype=float))
    v = np.log(np.asarray(values, dtype=float))
    return -np.diff(v) / np.diff(t)
