"""First Neumann eigenvalue, Poincare constant and Sobolev-ratio lower bounds.

Everything works on the assembled operators ``(M, A)``: ``M`` the diagonal
nu-mass matrix and ``A`` the tridiagonal stiffness.  The Neumann ``A`` is
singular with kernel the constants; solves are done on the mean-zero
subspace by grounding the last unknown and re-centring afterwards.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConvergenceError, MultiplicityError
from .mesh import (DIRICHLET, NEUMANN, DiscreteOperators, apply_stiffness, assemble,
                   build_mesh, energy, norm, tridiag_solve, weighted_mean)
from .weights import WeightSpec, nu_total

MODES = ("mean_centered", "dirichlet", "weak_form")

# per-level growth of the best ratio above which sigma is flagged as outside the range
UNBOUNDED_GROWTH = 0.25
FLAT_GROWTH = 0.10


@dataclass
class EigResult:
    lambda1: float
    vector: np.ndarray
    residual: float
    iterations: int


@dataclass
class SobolevEstimate:
    sigma: float
    mode: str
    best_ratio: float
    iterations: int
    history: list = field(default_factory=list)
    refinement_trend: list = field(default_factory=list)
    levels: list = field(default_factory=list)
    verdict: Optional[str] = None

    @property
    def growth(self) -> list:
        t = self.refinement_trend
        return [t[i + 1] / t[i] - 1.0 for i in range(len(t) - 1)]


# -- linear solves --------------------------------------------------------------

def _grounded_band(ops: DiscreteOperators) -> np.ndarray:
    """Neumann stiffness with the last row/column removed (nonsingular if connected)."""
    return ops.banded()[:, :-1].copy()


def solve_mean_zero(ops: DiscreteOperators, rhs: np.ndarray, band=None) -> np.ndarray:
    """Solve ``A x = rhs`` (``sum(rhs) = 0``) for the nu-mean-zero solution ``x``."""
    if band is None:
        band = _grounded_band(ops)
    x = np.zeros(ops.n)
    r = rhs - rhs.sum() / ops.n  # remove round-off incompatibility
    x[:-1] = tridiag_solve(band, r[:-1])
    return x - weighted_mean(ops, x)


def _require_neumann_connected(ops: DiscreteOperators) -> None:
    if ops.bc != NEUMANN:
        raise ValueError("this routine needs Neumann operators")
    if not ops.connected:
        raise MultiplicityError("some transmissibility vanishes; the zero eigenvalue is not simple")


def rayleigh_residual(ops: DiscreteOperators, v: np.ndarray, lam: float) -> float:
    Mv = ops.cell_mass * v
    return float(np.linalg.norm(apply_stiffness(ops, v) - lam * Mv) / np.linalg.norm(Mv))


def _inverse_iteration(ops, solve, v, tol, max_iter):
    """Inverse iteration ``w = solve(M v)``.

    Stops once the Rayleigh residual is below ``tol`` or, on strongly graded
    meshes where round-off keeps the residual above ``tol``, once the
    Rayleigh quotient has been stationary to a few ulps for 5 iterations.
    """
    M = ops.cell_mass
    lam = math.inf
    res = math.inf
    still = 0
    for it in range(1, max_iter + 1):
        w = solve(M * v)
        w /= norm(ops, w, 2)
        lam_new = float(np.dot(w, apply_stiffness(ops, w)) / np.dot(w, M * w))
        res = rayleigh_residual(ops, w, lam_new)
        still = still + 1 if abs(lam_new - lam) <= 1e-14 * lam_new else 0
        v, lam = w, lam_new
        if res <= tol and still >= 1 or still >= 5:
            return v, lam, res, it
    raise ConvergenceError(f"inverse iteration stalled after {max_iter} iterations "
                           f"(residual {res:.2e})")


def lambda1_neumann(ops: DiscreteOperators, tol: float = 1e-10,
                    max_iter: int = 10_000) -> EigResult:
    """Smallest nonzero eigenvalue of ``A v = lambda M v`` by deflated inverse iteration."""
    _require_neumann_connected(ops)
    band = _grounded_band(ops)
    # a monotone start overlaps the first Neumann mode in 1D
    v = ops.mesh.centers - weighted_mean(ops, ops.mesh.centers)
    v /= norm(ops, v, 2)
    v, lam, res, it = _inverse_iteration(ops, lambda b: solve_mean_zero(ops, b, band),
                                         v, tol, max_iter)
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return EigResult(lam, v, res, it)


def lambda1_dirichlet(ops: DiscreteOperators, tol: float = 1e-10,
                      max_iter: int = 10_000) -> EigResult:
    """Smallest eigenvalue of the Dirichlet pencil (used as an ascent start)."""
    if ops.bc != DIRICHLET:
        raise ValueError("need Dirichlet operators")
    band = ops.banded()
    v = np.ones(ops.n)
    v, lam, res, it = _inverse_iteration(ops, lambda b: tridiag_solve(band, b), v, tol, max_iter)
    return EigResult(lam, v, res, it)


def poincare_constant(ops: DiscreteOperators) -> float:
    return lambda1_neumann(ops).lambda1 ** -0.5


# -- Sobolev ratio ascent ------------------------------------------------------------

class _Problem:
    """Ratio, Euclidean gradient and ascent metric for one mode."""

    def __init__(self, ops: DiscreteOperators, q: float, mode: str):
        self.ops, self.q, self.mode = ops, q, mode
        self.M = ops.cell_mass
        self.nu = ops.total_mass
        if mode == "mean_centered":
            self.band = _grounded_band(ops)
        elif mode == "dirichlet":
            self.band = ops.banded()
        else:
            self.band = ops.banded()
            self.band[1] += self.M

    def center(self, v):
        if self.mode == "mean_centered":
            return v - np.dot(self.M, v) / self.nu
        return v

    def ratio(self, v) -> float:
        num = norm(self.ops, self.center(v), self.q)
        den = energy(self.ops, v)
        if self.mode == "weak_form":
            den += norm(self.ops, v, 1)
        return num / den if den > 0 else 0.0

    def grad(self, v) -> np.ndarray:
        ops, q, M = self.ops, self.q, self.M
        w = self.center(v)
        num = norm(ops, w, q)
        gnum = M * np.abs(w / num) ** (q - 2.0) * (w / num)
        if self.mode == "mean_centered":
            gnum = gnum - M * gnum.sum() / self.nu
        en = energy(ops, v)
        gden = apply_stiffness(ops, v) / en
        den = en
        if self.mode == "weak_form":
            den += norm(ops, v, 1)
            gden = gden + M * np.sign(v)
        return gnum / den - num * gden / den ** 2

    def precondition(self, g) -> np.ndarray:
        if self.mode == "mean_centered":
            return solve_mean_zero(self.ops, g, self.band)
        return tridiag_solve(self.band, g)

    def inner(self, a, b) -> float:
        out = float(np.dot(a, apply_stiffness(self.ops, b)))
        if self.mode == "weak_form":
            out += float(np.dot(a, self.M * b))
        return out

    def normalize(self, v):
        v = self.center(v)
        return v / math.sqrt(self.inner(v, v))


def _ascend(prob: _Problem, v0, step: float, max_iter: int):
    v = prob.normalize(v0)
    R = prob.ratio(v)
    hist = [R]
    s = step
    it = 0
    for it in range(1, max_iter + 1):
        d = prob.precondition(prob.grad(v))
        d = prob.center(d)
        d = d - prob.inner(d, v) * v
        nd = math.sqrt(max(prob.inner(d, d), 0.0))
        if nd == 0.0 or not math.isfinite(nd):
            break
        d /= nd
        moved = False
        while s > 1e-12:
            w = math.cos(s) * v + math.sin(s) * d
            Rw = prob.ratio(w)
            if Rw > R:
                v, R, moved = w, Rw, True
                s = min(2.0 * s, step)
                break
            s *= 0.5
        hist.append(R)
        if not moved:
            break
    return v, R, it, hist


def _start_vectors(ops: DiscreteOperators, mode: str, n_random: int, seed: int):
    rng = np.random.default_rng(seed)
    starts = []
    if mode == "dirichlet":
        starts.append(lambda1_dirichlet(ops).vector)
    else:
        starts.append(lambda1_neumann(ops).vector if ops.connected else ops.mesh.centers.copy())
    for _ in range(n_random):
        starts.append(rng.standard_normal(ops.n))
    return starts


def sobolev_constant(ops: DiscreteOperators, sigma: float, mode: str = "mean_centered",
                     seed: int = 0, n_random: int = 5, step: float = 0.1,
                     max_iter: int = 2000) -> SobolevEstimate:
    """Best discrete ratio ``||v||_{2 sigma; nu} / ||grad v||_{2; mu}`` found by ascent.

    The ratio uses ``v - mean(v)`` for ``mean_centered``, plain ``v`` with the
    Dirichlet energy for ``dirichlet`` and ``||grad v|| + ||v||_1`` in the
    denominator for ``weak_form``.  Ascent runs along the unit sphere of the
    energy metric; it starts from the first eigenvector and ``n_random``
    seeded random vectors.  The result is a lower bound for the constant.
    """
    if not sigma > 1.0:
        raise ValueError(f"sigma must exceed 1, got {sigma}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "dirichlet" and ops.bc != DIRICHLET:
        raise ValueError("dirichlet mode needs Dirichlet operators")
    if mode != "dirichlet":
        _require_neumann_connected(ops)
    prob = _Problem(ops, 2.0 * sigma, mode)
    best = -math.inf
    best_hist: list = []
    total = 0
    for v0 in _start_vectors(ops, mode, n_random, seed):
        _, R, it, hist = _ascend(prob, v0, step, max_iter)
        total += it
        if R > best:
            best, best_hist = R, hist
    return SobolevEstimate(sigma, mode, best, total, best_hist, [best])


def default_levels(base: int = 32, count: int = 3, factor: int = 4, grading: float = 4.0):
    """Refinement levels ``(n, grading)``; strong grading resolves concentration at x = 0."""
    return [(base * factor ** i, grading) for i in range(count)]


def classify_trend(trend: Sequence[float]) -> str:
    growth = [trend[i + 1] / trend[i] - 1.0 for i in range(len(trend) - 1)]
    if not growth:
        return "inconclusive"
    if growth[-1] > UNBOUNDED_GROWTH:
        return "likely unbounded"
    if all(abs(g) < FLAT_GROWTH for g in growth):
        return "flat"
    return "inconclusive"


def sobolev_scan(spec: WeightSpec, sigma: float, mode: str = "mean_centered",
                 levels=None, seed: int = 0, **kw) -> SobolevEstimate:
    """Run :func:`sobolev_constant` on a sequence of meshes and classify the trend."""
    if levels is None:
        levels = default_levels()
    bc = DIRICHLET if mode == "dirichlet" else NEUMANN
    trend, iters, est = [], 0, None
    for n, g in levels:
        ops = assemble(spec, build_mesh(spec.domain, int(n), float(g)), bc)
        est = sobolev_constant(ops, sigma, mode, seed=seed, **kw)
        trend.append(est.best_ratio)
        iters += est.iterations
    out = SobolevEstimate(sigma, mode, trend[-1], iters, est.history, trend,
                          [list(l) for l in levels])
    out.verdict = classify_trend(trend)
    return out


def poincare_sobolev_floor(ops: DiscreteOperators, sigma: float) -> float:
    """Lower bound ``C_P nu(Omega)^(1/(2 sigma) - 1/2)`` implied by Hoelder on finite measure."""
    return poincare_constant(ops) * nu_total(ops.spec) ** (1.0 / (2.0 * sigma) - 0.5)


# -- Phi-composed ratio ------------------------------------------------------------

def phi_inequality_margin(ops: DiscreteOperators, r: float, m: float, xi: np.ndarray,
                          sigma: float, mean_tol: float = 1e-10) -> float:
    """``||Phi_{r,m}(xi)||_{2 sigma; nu} / ||grad Phi_{r,m}(xi)||_{2; mu}`` for mean-zero ``xi``."""
    from .exact import phi_rm_array

    xi = np.asarray(xi, dtype=float)
    scale = max(float(np.max(np.abs(xi))), 1e-300)
    if abs(weighted_mean(ops, xi)) > mean_tol * scale:
        raise ValueError("xi must have zero nu-mean")
    if np.all(xi == 0.0):
        raise ValueError("the ratio is undefined for xi = 0")
    f = phi_rm_array(r, m, xi)
    return norm(ops, f, 2.0 * sigma) / energy(ops, f)
