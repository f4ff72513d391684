"""1D meshes and the finite-volume weighted Laplacian.

Cells carry nu-masses ``m_i = int_cell rho_nu``; neighbouring cells are coupled
through transmissibilities ``tau = 1 / int_{c_i}^{c_{i+1}} dx / rho_mu`` taken
between cell centres.  Under Neumann conditions there is no boundary coupling,
so the stiffness matrix has zero row sums.  Under homogeneous Dirichlet
conditions each end cell talks to a ghost value 0 through the resistance from
its centre to the boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import AssemblyError, InfiniteMeasureError
from .weights import WeightSpec, mu_resistance, nu_measure, rho_nu_array

NEUMANN = "neumann"
DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class Mesh1D:
    edges: np.ndarray
    grading: float = 1.0

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=float)
        if e.ndim != 1 or e.size < 3:
            raise ValueError("a mesh needs at least two cells")
        if not np.all(np.diff(e) > 0):
            raise ValueError("mesh edges must be strictly increasing")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)

    @property
    def n(self) -> int:
        return self.edges.size - 1

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.edges[0]), float(self.edges[-1])


def build_mesh(domain: tuple[float, float], n: int, grading: float = 1.0) -> Mesh1D:
    """Edges ``x_i = a + (b - a) (i/n)**grading``; ``grading > 1`` clusters cells at ``a``."""
    if int(n) != n or n < 2:
        raise ValueError(f"need n >= 2 cells, got {n}")
    if not grading >= 1.0:
        raise ValueError(f"grading must be >= 1, got {grading}")
    a, b = float(domain[0]), float(domain[1])
    if not a < b:
        raise ValueError("empty domain")
    s = np.arange(int(n) + 1, dtype=float) / int(n)
    edges = a + (b - a) * s ** grading
    edges[0], edges[-1] = a, b
    return Mesh1D(edges, float(grading))


def default_grading(spec: WeightSpec) -> float:
    return 2.0 if spec.singular_at_left else 1.0


@dataclass(frozen=True)
class DiscreteOperators:
    """Cell masses, face transmissibilities and boundary couplings.

    ``trans[i]`` couples cells ``i`` and ``i+1``.  ``trans_left``/``trans_right``
    are zero under Neumann conditions.
    """

    spec: WeightSpec
    mesh: Mesh1D
    bc: str
    cell_mass: np.ndarray
    trans: np.ndarray
    trans_left: float = 0.0
    trans_right: float = 0.0

    @property
    def n(self) -> int:
        return self.cell_mass.size

    @property
    def total_mass(self) -> float:
        return float(self.cell_mass.sum())

    @property
    def connected(self) -> bool:
        return bool(np.all(self.trans > 0))

    def diag(self) -> np.ndarray:
        d = np.zeros(self.n)
        d[:-1] += self.trans
        d[1:] += self.trans
        d[0] += self.trans_left
        d[-1] += self.trans_right
        return d

    def banded(self) -> np.ndarray:
        """Stiffness matrix in ``scipy.linalg.solve_banded`` (1, 1) layout."""
        ab = np.zeros((3, self.n))
        ab[0, 1:] = -self.trans
        ab[1] = self.diag()
        ab[2, :-1] = -self.trans
        return ab

    def dense(self) -> np.ndarray:
        A = np.diag(self.diag())
        i = np.arange(self.n - 1)
        A[i, i + 1] = -self.trans
        A[i + 1, i] = -self.trans
        return A


def assemble(spec: WeightSpec, mesh: Mesh1D, bc: str = NEUMANN) -> DiscreteOperators:
    if bc not in (NEUMANN, DIRICHLET):
        raise ValueError(f"unknown boundary condition {bc!r}")
    a, b = mesh.domain
    scale = abs(spec.a) + abs(spec.b)
    if abs(a - spec.a) > 1e-12 * scale or abs(b - spec.b) > 1e-12 * scale:
        raise AssemblyError(f"mesh domain {mesh.domain} does not match weight domain {spec.domain}")
    edges = mesh.edges
    try:
        mass = np.array([nu_measure(spec, (edges[i], edges[i + 1])) for i in range(mesh.n)])
    except InfiniteMeasureError as exc:
        raise AssemblyError(f"infinite nu-measure in a cell: {exc}") from exc
    if not np.all(mass > 0):
        raise AssemblyError("a cell has zero nu-measure")
    c = mesh.centers
    res = np.array([mu_resistance(spec, (c[i], c[i + 1])) for i in range(mesh.n - 1)])
    with np.errstate(divide="ignore"):
        trans = np.where(np.isinf(res), 0.0, 1.0 / res)
    tl = tr = 0.0
    if bc == DIRICHLET:
        rl = mu_resistance(spec, (a, c[0]))
        rr = mu_resistance(spec, (c[-1], b))
        tl = 0.0 if math.isinf(rl) else 1.0 / rl
        tr = 0.0 if math.isinf(rr) else 1.0 / rr
    mass.setflags(write=False)
    trans.setflags(write=False)
    return DiscreteOperators(spec, mesh, bc, mass, trans, tl, tr)


def apply_stiffness(ops: DiscreteOperators, f: np.ndarray) -> np.ndarray:
    """Action of the discrete ``-div(rho_mu grad .)``: sum over faces of ``tau (f_i - f_j)``."""
    f = np.asarray(f, dtype=float)
    if f.shape != (ops.n,):
        raise ValueError(f"field has shape {f.shape}, expected ({ops.n},)")
    flux = ops.trans * (f[:-1] - f[1:])
    out = np.zeros_like(f)
    out[:-1] += flux
    out[1:] -= flux
    out[0] += ops.trans_left * f[0]
    out[-1] += ops.trans_right * f[-1]
    return out


def energy(ops: DiscreteOperators, f: np.ndarray) -> float:
    """Discrete ``||grad f||_{2;mu}``: sqrt of sum tau (jump)^2 (+ ghost terms)."""
    f = np.asarray(f, dtype=float)
    e = float(np.sum(ops.trans * np.diff(f) ** 2))
    e += ops.trans_left * f[0] ** 2 + ops.trans_right * f[-1] ** 2
    return math.sqrt(e)


def weighted_mean(ops: DiscreteOperators, f: np.ndarray) -> float:
    return float(np.dot(ops.cell_mass, f) / ops.total_mass)


def norm(ops: DiscreteOperators, f: np.ndarray, p: float) -> float:
    """nu-weighted L^p norm of a cell field; ``p = inf`` gives the max norm."""
    if not p >= 1:
        raise ValueError(f"norm exponent must be >= 1, got {p}")
    a = np.abs(np.asarray(f, dtype=float))
    if math.isinf(p):
        return float(a.max())
    amax = a.max()
    if amax == 0.0:
        return 0.0
    # scale to avoid under/overflow for large p
    return float(amax * np.dot(ops.cell_mass, (a / amax) ** p) ** (1.0 / p))


def tridiag_solve(ab: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    return solve_banded((1, 1), ab, rhs, overwrite_ab=False, overwrite_b=False, check_finite=False)


def cell_average(ops: DiscreteOperators, func, order: int = 8) -> np.ndarray:
    """nu-weighted cell averages of ``func`` by Gauss-Legendre per cell.

    ``func`` takes an array of points.  Weighted integrand ``func * rho_nu`` is
    integrated and divided by the exact cell mass.
    """
    xg, wg = np.polynomial.legendre.leggauss(order)
    e = ops.mesh.edges
    lo, hi = e[:-1], e[1:]
    half = 0.5 * (hi - lo)
    pts = (0.5 * (hi + lo))[:, None] + half[:, None] * xg[None, :]
    rho = rho_nu_array(ops.spec, pts)
    vals = np.asarray(func(pts), dtype=float)
    integral = np.sum(vals * rho * wg[None, :], axis=1) * half
    # normalise by the quadrature mass so constants are reproduced exactly
    qmass = np.sum(rho * wg[None, :], axis=1) * half
    return integral / qmass
