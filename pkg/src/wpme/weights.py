"""Weight families (rho_nu, rho_mu) on an interval and their integrals.

The mass density ``rho_nu`` enters the cell masses and the mobility density
``rho_mu`` enters the face resistances ``int dx / rho_mu``.  Every family
supported here has a closed-form antiderivative; ``method="quad"`` switches
to adaptive quadrature, which the tests use as an independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from scipy import integrate

from .errors import DomainError, InfiniteMeasureError, UnsupportedSpecError

FAMILIES = ("unit", "power", "log_power", "exponential", "radial_power")

QUAD_RTOL = 1e-12


@dataclass(frozen=True)
class SigmaRange:
    """Admissible Sobolev exponents ``sigma`` in ``(1, upper]`` or ``(1, upper)``."""

    upper: float = math.inf
    upper_inclusive: bool = False
    empty: bool = False
    lower: float = field(default=1.0, init=False)

    @classmethod
    def none(cls) -> "SigmaRange":
        return cls(upper=1.0, upper_inclusive=False, empty=True)

    def __post_init__(self):
        if not self.empty and not self.upper > 1.0:
            raise ValueError("a non-empty sigma range needs upper > 1")

    def __contains__(self, sigma: float) -> bool:
        if self.empty or sigma <= 1.0:
            return False
        if self.upper_inclusive:
            return sigma <= self.upper
        return sigma < self.upper

    def as_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper,
                "upper_inclusive": self.upper_inclusive, "empty": self.empty}


@dataclass(frozen=True)
class WeightSpec:
    """A pair of weights on the interval ``(a, b)``.

    ``power``:        rho_nu = x**alpha,             rho_mu = x**beta
    ``log_power``:    rho_nu = |log x|**alpha / x,    rho_mu = x |log x|**beta  (needs b < 1)
    ``exponential``:  rho_nu = exp(alpha |x|),        rho_mu = exp(beta |x|)
    ``radial_power``: rho_nu = rho_mu = x**(N-1)      (radial reduction on a ball)
    ``unit``:         rho_nu = rho_mu = 1
    """

    family: str = "unit"
    alpha: float = 0.0
    beta: float = 0.0
    a: float = 0.0
    b: float = 1.0
    N: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise UnsupportedSpecError(f"unknown weight family {self.family!r}")
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise DomainError(f"need a finite interval with a < b, got ({self.a}, {self.b})")
        if self.family == "radial_power":
            if self.N is None or int(self.N) != self.N or self.N < 2:
                raise UnsupportedSpecError("radial_power needs an integer N >= 2")
            object.__setattr__(self, "N", int(self.N))
            object.__setattr__(self, "alpha", float(self.N - 1))
            object.__setattr__(self, "beta", float(self.N - 1))
        elif self.family == "unit":
            object.__setattr__(self, "alpha", 0.0)
            object.__setattr__(self, "beta", 0.0)
        if self.family in ("power", "radial_power", "log_power") and self.a < 0:
            raise DomainError(f"{self.family} weights live on x > 0")
        if self.family == "log_power" and not self.b < 1.0:
            raise DomainError("log_power weights need b < 1")
        # reject specs whose total nu-mass diverges
        total = nu_measure(self, (self.a, self.b))
        if not math.isfinite(total):
            raise InfiniteMeasureError(f"nu(Omega) is infinite for {self}")

    @classmethod
    def radial(cls, N: int, radius: float = 1.0) -> "WeightSpec":
        return cls(family="radial_power", a=0.0, b=radius, N=N)

    @property
    def domain(self) -> tuple[float, float]:
        return (self.a, self.b)

    @property
    def singular_at_left(self) -> bool:
        """True when either weight vanishes or blows up at ``x = a = 0``."""
        if self.family in ("power", "radial_power"):
            return self.a == 0.0 and (self.alpha != 0.0 or self.beta != 0.0)
        if self.family == "log_power":
            return self.a == 0.0
        return False

    def to_record(self) -> dict:
        rec = {"family": self.family, "alpha": self.alpha, "beta": self.beta,
               "a": self.a, "b": self.b}
        if self.N is not None:
            rec["N"] = self.N
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "WeightSpec":
        return cls(family=rec.get("family", "unit"), alpha=float(rec.get("alpha", 0.0)),
                   beta=float(rec.get("beta", 0.0)), a=float(rec.get("a", 0.0)),
                   b=float(rec.get("b", 1.0)), N=rec.get("N"))


# -- pointwise evaluation ---------------------------------------------------

def _check_open(spec: WeightSpec, x: float) -> None:
    if not (spec.a < x < spec.b):
        raise DomainError(f"x={x} is outside the open interval ({spec.a}, {spec.b})")


def eval_nu(spec: WeightSpec, x: float) -> float:
    _check_open(spec, x)
    fam = spec.family
    if fam == "unit":
        return 1.0
    if fam in ("power", "radial_power"):
        return x ** spec.alpha
    if fam == "log_power":
        return abs(math.log(x)) ** spec.alpha / x
    return math.exp(spec.alpha * abs(x))


def eval_mu(spec: WeightSpec, x: float) -> float:
    _check_open(spec, x)
    fam = spec.family
    if fam == "unit":
        return 1.0
    if fam in ("power", "radial_power"):
        return x ** spec.beta
    if fam == "log_power":
        return x * abs(math.log(x)) ** spec.beta
    return math.exp(spec.beta * abs(x))


# -- closed-form integrals --------------------------------------------------

def _power_integral(lo: float, hi: float, e: float) -> float:
    """int_lo^hi s**e ds for 0 <= lo <= hi <= inf, +inf when divergent."""
    if hi <= lo:
        return 0.0
    p = e + 1.0
    if math.isinf(hi):
        if p >= 0.0:
            return math.inf
        if lo == 0.0:
            return math.inf
        return lo ** p / (-p)
    if lo == 0.0:
        if p <= 0.0:
            return math.inf
        return hi ** p / p
    if p == 0.0:
        return math.log(hi) - math.log(lo)
    if hi - lo < lo:
        # stable form of (hi**p - lo**p)/p for thin cells away from 0
        return lo ** p * math.expm1(p * math.log1p((hi - lo) / lo)) / p
    try:
        return (hi ** p - lo ** p) / p
    except OverflowError:  # lo is subnormal and p < 0: beyond float range
        return math.inf


def _exp_integral(lo: float, hi: float, c: float) -> float:
    """int_lo^hi exp(c |x|) dx."""
    if hi <= lo:
        return 0.0
    if lo < 0.0 < hi:
        return _exp_integral(lo, 0.0, c) + _exp_integral(0.0, hi, c)
    if hi <= 0.0:
        lo, hi = -hi, -lo
    if c == 0.0:
        return hi - lo
    return math.exp(c * lo) * math.expm1(c * (hi - lo)) / c


def _log_power_integral(lo: float, hi: float, e: float) -> float:
    """int_lo^hi |log x|**e / x dx on 0 <= lo < hi < 1 via s = -log x."""
    s_hi = math.inf if lo == 0.0 else -math.log(lo)
    s_lo = -math.log(hi)
    return _power_integral(s_lo, s_hi, e)


def _check_cell(spec: WeightSpec, cell: tuple[float, float]) -> tuple[float, float]:
    lo, hi = float(cell[0]), float(cell[1])
    tol = 1e-14 * (abs(spec.a) + abs(spec.b))
    if lo > hi or lo < spec.a - tol or hi > spec.b + tol:
        raise DomainError(f"cell {cell} is not inside [{spec.a}, {spec.b}]")
    return max(lo, spec.a), min(hi, spec.b)


def _quad(f, lo: float, hi: float) -> float:
    val, _ = integrate.quad(f, lo, hi, epsabs=0.0, epsrel=QUAD_RTOL, limit=200)
    return val


def nu_measure(spec: WeightSpec, cell: tuple[float, float], method: str = "exact") -> float:
    """nu-measure of ``cell``; raises :class:`InfiniteMeasureError` if it diverges."""
    lo, hi = _check_cell(spec, cell)
    if method == "quad":
        val = _quad(lambda x: eval_nu(spec, x), lo, hi) if hi > lo else 0.0
    else:
        fam = spec.family
        if fam == "unit":
            val = hi - lo
        elif fam in ("power", "radial_power"):
            val = _power_integral(lo, hi, spec.alpha)
        elif fam == "log_power":
            val = _log_power_integral(lo, hi, spec.alpha)
        else:
            val = _exp_integral(lo, hi, spec.alpha)
    if not math.isfinite(val):
        raise InfiniteMeasureError(f"nu-measure of {cell} diverges for {spec.family}")
    return val


def mu_resistance(spec: WeightSpec, cell: tuple[float, float], method: str = "exact") -> float:
    """int_cell dx / rho_mu; ``math.inf`` flags a divergent integral (zero-flux edge)."""
    lo, hi = _check_cell(spec, cell)
    if hi <= lo:
        raise DomainError("mu_resistance needs a cell of nonzero length")
    if method == "quad":
        try:
            return _quad(lambda x: 1.0 / eval_mu(spec, x), lo, hi)
        except (ZeroDivisionError, OverflowError):
            return math.inf
    fam = spec.family
    if fam == "unit":
        return hi - lo
    if fam in ("power", "radial_power"):
        return _power_integral(lo, hi, -spec.beta)
    if fam == "log_power":
        # 1/rho_mu = |log x|**(-beta) / x
        return _log_power_integral(lo, hi, -spec.beta)
    return _exp_integral(lo, hi, -spec.beta)


def nu_total(spec: WeightSpec) -> float:
    return nu_measure(spec, spec.domain)


# -- admissible Sobolev exponents ------------------------------------------

def _power_case(alpha: float, beta: float) -> SigmaRange:
    if beta <= 1.0:
        return SigmaRange() if alpha > -1.0 else SigmaRange.none()
    if alpha > beta - 2.0:
        return SigmaRange(upper=(alpha + 1.0) / (beta - 1.0), upper_inclusive=True)
    return SigmaRange.none()


def _log_power_case(alpha: float, beta: float) -> SigmaRange:
    if beta >= 1.0:
        return SigmaRange() if alpha < -1.0 else SigmaRange.none()
    if alpha < beta - 2.0:
        return SigmaRange(upper=(alpha + 1.0) / (beta - 1.0), upper_inclusive=True)
    return SigmaRange.none()


def admissible_sigma(spec: WeightSpec) -> SigmaRange:
    """Range of sigma > 1 for which the mean-centred Sobolev inequality holds.

    Only the bounded-interval entries of the standard catalogue are known; any
    other family/domain pair raises :class:`UnsupportedSpecError`.
    """
    fam = spec.family
    if fam == "unit":
        return SigmaRange()
    if fam in ("power", "radial_power"):
        if spec.a != 0.0:
            raise UnsupportedSpecError("power weights are catalogued on (0, b) only")
        return _power_case(spec.alpha, spec.beta)
    if fam == "log_power":
        if spec.a != 0.0:
            raise UnsupportedSpecError("log_power weights are catalogued on (0, c) only")
        return _log_power_case(spec.alpha, spec.beta)
    raise UnsupportedSpecError(
        "exponential weights are catalogued on the whole line only; no bounded-interval entry")


def sobolev_exponent(spec: WeightSpec) -> float:
    """Largest admissible sigma (the sharp one); +inf when every sigma > 1 works."""
    rng = admissible_sigma(spec)
    if rng.empty:
        raise UnsupportedSpecError(f"no admissible sigma for {spec}")
    return rng.upper


def rho_nu_array(spec: WeightSpec, x) -> "np.ndarray":
    """Vectorised rho_nu for points already known to lie in the open domain."""
    import numpy as np

    x = np.asarray(x, dtype=float)
    fam = spec.family
    if fam == "unit":
        return np.ones_like(x)
    if fam in ("power", "radial_power"):
        return x ** spec.alpha
    if fam == "log_power":
        return np.abs(np.log(x)) ** spec.alpha / x
    return np.exp(spec.alpha * np.abs(x))
