"""Backward-Euler / Newton solver for rho_nu u_t = div(rho_mu grad(u^m)).

One step solves

    M (u+ - u) / dt + A phi(u+) = 0,     phi(y) = |y|^(m-1) y,

with the tridiagonal Jacobian ``M/dt + A diag(m |u+|^(m-1) + eps)``.  Because
``1^T A = 0`` under Neumann conditions every Newton update satisfies
``1^T M delta = -1^T M (v - u)``, so each iterate (damped or not) keeps the
nu-mass of the previous time level up to round-off.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import EvolutionError, StepError
from .mesh import DiscreteOperators, apply_stiffness, norm, tridiag_solve, weighted_mean

log = logging.getLogger(__name__)

RECORD_FIELDS = ("mass", "mean", "l1", "l2", "lq0", "linf", "linf_err_mean", "l2_err_mean")


@dataclass(frozen=True)
class SolverConfig:
    m: float = 2.0
    dt_policy: str = "ramp"  # "ramp" or "fixed"
    dt: float = 1e-3  # fixed step (dt_policy="fixed")
    dt0: float = 1e-8
    ramp: float = 1.3
    dt_max: Optional[float] = None  # None -> T/200
    newton_tol: float = 1e-11
    max_newton: int = 50
    eps_reg: float = 1e-12
    bc: str = "neumann"

    def __post_init__(self):
        if not self.m > 1.0:
            raise ValueError(f"nonlinearity exponent must satisfy m > 1, got {self.m}")
        if not (self.newton_tol > 0 and self.dt0 > 0 and self.dt > 0 and self.ramp >= 1.0):
            raise ValueError("tolerances and time steps must be positive (ramp >= 1)")
        if self.dt_policy not in ("ramp", "fixed"):
            raise ValueError(f"unknown dt policy {self.dt_policy!r}")
        if self.eps_reg < 0 or self.max_newton < 1:
            raise ValueError("eps_reg must be >= 0 and max_newton >= 1")


@dataclass
class StepStats:
    newton_iters: int
    final_residual: float
    damping_used: bool


@dataclass
class Trajectory:
    times: np.ndarray
    records: dict
    snapshots: list = field(default_factory=list)
    steps: int = 0
    newton_iters: int = 0

    def __getitem__(self, name: str) -> np.ndarray:
        if name == "t":
            return self.times
        return self.records[name]

    def rows(self):
        cols = [self.times] + [self.records[k] for k in RECORD_FIELDS]
        return list(zip(*cols))


def signed_power(u, m: float):
    """``|u|^(m-1) u`` elementwise (0 maps to 0)."""
    u = np.asarray(u, dtype=float)
    out = np.abs(u) ** (m - 1.0) * u
    return out if out.ndim else float(out)


def _abs_banded_apply(band, p):
    """``|A| p`` for a tridiagonal ``A`` in ``solve_banded`` layout."""
    ab = np.abs(band)
    y = ab[1] * p
    y[:-1] += ab[0, 1:] * p[1:]
    y[1:] += ab[2, :-1] * p[:-1]
    return y


def _residual(ops, mass, u_old, v, dt, m):
    return mass * (v - u_old) / dt + apply_stiffness(ops, signed_power(v, m))


def step(ops: DiscreteOperators, cfg: SolverConfig, u: np.ndarray, dt: float):
    """Advance one backward-Euler step of length ``dt``; returns ``(u_new, StepStats)``."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    u = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(u)):
        raise StepError("non-finite input field")
    m = cfg.m
    mass = ops.cell_mass
    band = ops.banded()
    # relative to the size of both terms of the residual, so round-off in the
    # flux A phi(u) (large for big |u| and m) cannot stall the iteration
    scale = (float(np.linalg.norm(mass * u)) / dt
             + float(np.linalg.norm(_abs_banded_apply(band, np.abs(signed_power(u, m))))) + 1.0)
    tol_res = cfg.newton_tol * scale
    tol_upd = 1e3 * cfg.newton_tol

    v = u.copy()
    F = _residual(ops, mass, u, v, dt, m)
    rnorm = float(np.linalg.norm(F))
    damped = False

    def direction(slopes):
        jac = band * slopes[None, :]
        jac[1] += mass / dt
        delta = tridiag_solve(jac, -F)
        if not np.all(np.isfinite(delta)):
            raise StepError("non-finite Newton update")
        return delta

    def line_search(delta, s_min):
        s = 1.0
        while s >= s_min:
            trial = v + s * delta
            F_trial = _residual(ops, mass, u, trial, dt, m)
            r_trial = float(np.linalg.norm(F_trial))
            if r_trial <= (1.0 - 1e-4 * s) * rnorm or r_trial <= tol_res:
                return s, trial, F_trial, r_trial
            s *= 0.5
        return None

    for it in range(1, cfg.max_newton + 1):
        delta = direction(m * np.abs(v) ** (m - 1.0) + cfg.eps_reg)
        found = line_search(delta, 1e-10)
        # Near u = 0 the tangent slope m|v|^(m-1) misses the |v|^m growth of the
        # flux, so the Newton direction may only descend for absurdly small steps.
        # Chord slopes (phi(v+delta)-phi(v))/delta are refined instead; their fixed
        # point solves the step exactly.
        k = 0
        while found is None and k < 30:
            delta = direction(_chord_slopes(v, delta, m, cfg.eps_reg))
            found = line_search(delta, 1e-10)
            k += 1
        if found is None:
            raise StepError(f"line search exhausted at Newton iteration {it}")
        s, v, F, rnorm = found
        damped = damped or s < 1.0 or k > 0
        if not np.all(np.isfinite(v)):
            raise StepError("non-finite Newton iterate")
        vmax = float(np.max(np.abs(v)))
        upd = s * float(np.max(np.abs(delta)))
        if rnorm <= tol_res and upd <= tol_upd * max(vmax, 1e-300):
            return v, StepStats(it, rnorm, damped)
    raise StepError(f"Newton did not converge in {cfg.max_newton} iterations "
                    f"(residual {rnorm:.3e}, target {tol_res:.3e})")


def _chord_slopes(v, delta, m, eps):
    tangent = m * np.abs(v) ** (m - 1.0)
    moved = np.abs(delta) > 1e-14 * (np.abs(v) + 1e-300)
    chord = np.divide(signed_power(v + delta, m) - signed_power(v, m), delta,
                      out=tangent.copy(), where=moved)
    return chord + eps


def norm_record(ops: DiscreteOperators, u: np.ndarray, q0: float = 1.0) -> dict:
    mean = weighted_mean(ops, u)
    dev = u - mean
    return {
        "mass": float(np.dot(ops.cell_mass, u)),
        "mean": mean,
        "l1": norm(ops, u, 1),
        "l2": norm(ops, u, 2),
        "lq0": norm(ops, u, q0),
        "linf": norm(ops, u, math.inf),
        "linf_err_mean": norm(ops, dev, math.inf),
        "l2_err_mean": norm(ops, dev, 2),
    }


def evolve(ops: DiscreteOperators, cfg: SolverConfig, u0: np.ndarray,
           output_times: Sequence[float], q0: float = 1.0,
           store_snapshots: bool = False) -> Trajectory:
    """Integrate from t=0 and record norms at t=0 and at every output time.

    Steps follow ``cfg.dt_policy``; a step that would overshoot the next output
    time is shortened to land on it exactly.  Failed steps are retried with
    half the step until ``dt < 1e-15 T``.
    """
    out_t = np.asarray(output_times, dtype=float)
    if out_t.size == 0 or not out_t[0] > 0 or np.any(np.diff(out_t) <= 0):
        raise ValueError("output times must be positive and strictly increasing")
    u = np.array(u0, dtype=float)
    if u.shape != (ops.n,):
        raise ValueError(f"initial field has shape {u.shape}, expected ({ops.n},)")
    T = float(out_t[-1])
    dt_floor = 1e-15 * T
    if cfg.dt_policy == "fixed":
        dt_nominal = cfg.dt
        dt_cap = cfg.dt
    else:
        dt_nominal = cfg.dt0
        dt_cap = cfg.dt_max if cfg.dt_max is not None else T / 200.0

    times = [0.0]
    recs = [norm_record(ops, u, q0)]
    snaps = [u.copy()] if store_snapshots else []
    t = 0.0
    nsteps = 0
    niters = 0
    for t_target in out_t:
        while t < t_target:
            dt = min(dt_nominal, dt_cap)
            landing = t + dt >= t_target * (1.0 - 1e-14)
            if landing:
                dt = t_target - t
            try:
                u_new, stats = step(ops, cfg, u, dt)
            except StepError as exc:
                dt_nominal = 0.5 * dt
                log.debug("step failed at t=%g dt=%g: %s", t, dt, exc)
                if dt_nominal < dt_floor:
                    raise EvolutionError(f"time step fell below {dt_floor:g} at t={t:g}: {exc}") from exc
                continue
            u = u_new
            nsteps += 1
            niters += stats.newton_iters
            if landing:
                t = float(t_target)
            else:
                t += dt
                if cfg.dt_policy == "ramp":
                    dt_nominal = dt * cfg.ramp
        times.append(t)
        recs.append(norm_record(ops, u, q0))
        if store_snapshots:
            snaps.append(u.copy())
    records = {k: np.array([r[k] for r in recs]) for k in RECORD_FIELDS}
    return Trajectory(np.array(times), records, snaps, nsteps, niters)
