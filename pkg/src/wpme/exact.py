"""Closed-form reference objects.

* source-type (Barenblatt) solutions of the radial N-d equation and of the
  1D equation with rho_nu = 1, rho_mu = x^beta on (0, b);
* the integral ``Phi_{r,m}(x) = int_0^x |y|^(r-1) |y+1|^((m-1)/2) dy`` and the
  normalised ratios bounding it;
* the ratio ``x^-b y^(1-b) / (x^-a y^(1-a) + y)`` whose supremum is finite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

CONFINEMENT_MARGIN = 0.9


@dataclass(frozen=True)
class BarenblattParams:
    """Self-similar solution ``t^-a (C - k x^w / t^(w g))_+^(1/(m-1))``.

    ``kind="nd_radial"``:   a = lambda = N/(N(m-1)+2), w = 2, g = lambda/N
    ``kind="weighted_1d"``: a = zeta = 1/(m+1-beta),   w = 2-beta, g = zeta
    """

    kind: str
    m: float
    C: float
    N: int = 3
    beta: float = 1.5

    def __post_init__(self):
        if not self.m > 1.0:
            raise ValueError("m must exceed 1")
        if not self.C > 0.0:
            raise ValueError("C must be positive")
        if self.kind == "nd_radial":
            if int(self.N) != self.N or self.N < 3:
                raise ValueError("nd_radial Barenblatt needs an integer N >= 3")
        elif self.kind == "weighted_1d":
            if not 1.0 < self.beta < 2.0:
                raise ValueError("weighted_1d Barenblatt needs beta in (1, 2)")
        else:
            raise ValueError(f"unknown Barenblatt kind {self.kind!r}")

    # nd exponents
    @property
    def lam(self) -> float:
        return self.N / (self.N * (self.m - 1.0) + 2.0)

    @property
    def gamma(self) -> float:
        return self.lam / self.N

    # weighted exponents
    @property
    def zeta(self) -> float:
        return 1.0 / (self.m + 1.0 - self.beta)

    @property
    def omega(self) -> float:
        return 2.0 - self.beta

    @property
    def k(self) -> float:
        m = self.m
        if self.kind == "nd_radial":
            return self.lam * (m - 1.0) / (2.0 * m * self.N)
        return (m - 1.0) / (m * (2.0 - self.beta) * (m + 1.0 - self.beta))

    @property
    def decay_exponent(self) -> float:
        """Exponent of ``||u_B(t)||_inf = C^(1/(m-1)) t^-decay``."""
        return self.lam if self.kind == "nd_radial" else self.zeta

    @property
    def space_power(self) -> float:
        return 2.0 if self.kind == "nd_radial" else self.omega

    @property
    def spread_exponent(self) -> float:
        """Support radius grows like ``t^spread``."""
        return self.gamma if self.kind == "nd_radial" else self.zeta

    def exponents(self) -> dict:
        if self.kind == "nd_radial":
            return {"lambda": self.lam, "gamma": self.gamma, "k": self.k}
        return {"zeta": self.zeta, "omega": self.omega, "k": self.k}


def barenblatt_value(p: BarenblattParams, x, t: float):
    if not t > 0:
        raise ValueError("Barenblatt profiles are defined for t > 0")
    x = np.abs(np.asarray(x, dtype=float))
    w = p.space_power
    g = p.spread_exponent
    bracket = p.C - p.k * x ** w / t ** (w * g)
    out = t ** (-p.decay_exponent) * np.maximum(bracket, 0.0) ** (1.0 / (p.m - 1.0))
    return out if out.ndim else float(out)


def barenblatt_sup(p: BarenblattParams, t: float) -> float:
    return p.C ** (1.0 / (p.m - 1.0)) * t ** (-p.decay_exponent)


def barenblatt_support_radius(p: BarenblattParams, t: float) -> float:
    if not t > 0:
        raise ValueError("t must be positive")
    return (p.C / p.k) ** (1.0 / p.space_power) * t ** p.spread_exponent


def time_of_confinement(p: BarenblattParams, domain_radius: float,
                        margin: float = CONFINEMENT_MARGIN) -> float:
    """Last time at which the support radius is still ``<= margin * domain_radius``."""
    if not domain_radius > 0:
        raise ValueError("domain radius must be positive")
    r0 = (p.C / p.k) ** (1.0 / p.space_power)
    return (margin * domain_radius / r0) ** (1.0 / p.spread_exponent)


def barenblatt_for_mass_radius(kind: str, m: float, t: float, radius: float, **kw) -> BarenblattParams:
    """Choose C so that the support radius at time ``t`` equals ``radius``."""
    probe = BarenblattParams(kind, m, 1.0, **kw)
    C = probe.k * (radius / t ** probe.spread_exponent) ** probe.space_power
    return BarenblattParams(kind, m, C, **kw)


# -- Phi_{r,m} ----------------------------------------------------------------

def _qaws(f, lo, hi, wvar):
    val, _ = integrate.quad(f, lo, hi, weight="alg", wvar=wvar,
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return val


def phi_rm(r: float, m: float, x: float) -> float:
    """``int_0^x |y|^(r-1) |y+1|^((m-1)/2) dy`` (signed, negative for x < 0).

    Algebraic endpoint behaviour at y = 0 and y = -1 is handled with
    Jacobi-weighted quadrature on pieces split at those points.
    """
    if r < 0.5 or m <= 1.0:
        raise ValueError("need r >= 1/2 and m > 1")
    a = 0.5 * (m - 1.0)
    x = float(x)
    if x == 0.0:
        return 0.0
    if x > 0.0:
        return _qaws(lambda y: (1.0 + y) ** a, 0.0, x, (r - 1.0, 0.0))
    s = -x
    # y -> -y: int_0^s y^(r-1) |1-y|^a dy, kink at y = 1
    if s <= 1.0:
        if s == 1.0:
            return -_qaws(lambda y: 1.0, 0.0, 1.0, (r - 1.0, a))
        return -_qaws(lambda y: (1.0 - y) ** a, 0.0, s, (r - 1.0, 0.0))
    head = _qaws(lambda y: 1.0, 0.0, 1.0, (r - 1.0, a))
    tail = _qaws(lambda y: y ** (r - 1.0), 1.0, s, (a, 0.0))
    return -(head + tail)


def phi_rm_array(r: float, m: float, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    return np.array([phi_rm(r, m, x) for x in xs.ravel()]).reshape(xs.shape)


def phi_low_power(m: float) -> float:
    """Power of r in the lower bound: 1 + max(1, (m-1)/2)."""
    return 1.0 + max(1.0, 0.5 * (m - 1.0))


def phi_bounds_margin(r: float, m: float, R: float, samples) -> tuple[float, float]:
    """min of r^(1+max(1,(m-1)/2)) |Phi|/|x|^r and max of r |Phi|/|x|^r over samples."""
    xs = np.asarray(samples, dtype=float)
    xs = xs[(xs != 0.0) & (np.abs(xs) <= R)]
    if xs.size == 0:
        raise ValueError("no usable sample points in [-R, R] \\ {0}")
    ratio = np.abs(phi_rm_array(r, m, xs)) / np.abs(xs) ** r
    return float(r ** phi_low_power(m) * ratio.min()), float(r * ratio.max())


# -- ratio lemma ---------------------------------------------------------------

def lemma31_ratio(alpha: float, beta: float, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return x ** -beta * y ** (1.0 - beta) / (x ** -alpha * y ** (1.0 - alpha) + y)


def lemma31_sup(alpha: float, beta: float, X: float = 1e3, points: int = 400,
                decades: float = 12.0) -> float:
    """Max of the ratio over a log-spaced ``points x points`` grid in ``[X 10^-decades, X]^2``."""
    if not (0.0 < beta < alpha < 1.0):
        raise ValueError("need 0 < beta < alpha < 1")
    g = X * np.logspace(-decades, 0.0, points)
    xx, yy = np.meshgrid(g, g, indexing="ij")
    return float(np.max(lemma31_ratio(alpha, beta, xx, yy)))
