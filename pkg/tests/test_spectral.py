import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import eigh_tridiagonal

from wpme.errors import ConvergenceError, MultiplicityError
from wpme.mesh import DIRICHLET, assemble, build_mesh, default_grading, norm, weighted_mean
from wpme.spectral import (classify_trend, default_levels, lambda1_dirichlet, lambda1_neumann,
                           phi_inequality_margin, poincare_constant, poincare_sobolev_floor,
                           rayleigh_residual, sobolev_constant, sobolev_scan)
from wpme.weights import WeightSpec


def _oracle_eigs(ops):
    """Eigenvalues of M^-1/2 A M^-1/2, which is symmetric tridiagonal."""
    s = 1.0 / np.sqrt(ops.cell_mass)
    d = ops.diag() * s * s
    e = -ops.trans * s[:-1] * s[1:]
    return eigh_tridiagonal(d, e, eigvals_only=True)


def test_unit_lambda1_is_pi_squared():
    ops = assemble(WeightSpec(), build_mesh((0, 1), 512))
    res = lambda1_neumann(ops)
    assert res.lambda1 == pytest.approx(math.pi ** 2, rel=1e-3)
    assert res.residual <= 1e-10
    assert abs(weighted_mean(ops, res.vector)) <= 1e-12
    assert norm(ops, res.vector, 2) == pytest.approx(1.0, abs=1e-12)
    # eigenvector is cos(pi x) up to sign and normalisation
    c = np.cos(np.pi * ops.mesh.centers)
    c /= norm(ops, c, 2)
    assert np.max(np.abs(res.vector - c)) < 1e-4


def test_dilation_and_poincare():
    l1 = lambda1_neumann(assemble(WeightSpec(), build_mesh((0, 1), 256))).lambda1
    l2 = lambda1_neumann(assemble(WeightSpec(b=2.0), build_mesh((0, 2), 256))).lambda1
    assert l1 / l2 == pytest.approx(4.0, rel=1e-12)
    assert poincare_constant(assemble(WeightSpec(), build_mesh((0, 1), 512))) == pytest.approx(1 / math.pi, rel=1e-3)
    assert poincare_constant(assemble(WeightSpec(b=2.0), build_mesh((0, 2), 512))) == pytest.approx(2 / math.pi, rel=1e-3)


@pytest.mark.parametrize("spec", [WeightSpec.radial(3), WeightSpec("power", alpha=2.0, beta=1.5),
                                  WeightSpec("log_power", alpha=-2.0, beta=1.5, b=0.5),
                                  WeightSpec("exponential", alpha=1.0, beta=-0.5, a=-1.0, b=1.0)])
def test_lambda1_against_tridiagonal_oracle(spec):
    ops = assemble(spec, build_mesh(spec.domain, 200, default_grading(spec)))
    res = lambda1_neumann(ops)
    ev = _oracle_eigs(ops)
    assert abs(ev[0]) < 1e-8 * ev[-1]
    assert res.lambda1 == pytest.approx(ev[1], rel=1e-9)
    assert abs(weighted_mean(ops, res.vector)) <= 1e-12
    # graded weighted meshes: round-off floor of the Euclidean residual sits near 1e-9
    assert res.residual <= 1e-8


def test_dirichlet_lambda1_against_oracle():
    ops = assemble(WeightSpec(), build_mesh((0, 1), 300), DIRICHLET)
    res = lambda1_dirichlet(ops)
    assert res.lambda1 == pytest.approx(_oracle_eigs(ops)[0], rel=1e-10)
    assert res.lambda1 == pytest.approx(math.pi ** 2, rel=1e-4)
    with pytest.raises(ValueError):
        lambda1_dirichlet(assemble(WeightSpec(), build_mesh((0, 1), 8)))


def test_disconnected_and_nonconvergent():
    ops = assemble(WeightSpec(), build_mesh((0, 1), 16))
    trans = ops.trans.copy()
    trans[5] = 0.0
    broken = dataclasses.replace(ops, trans=trans)
    with pytest.raises(MultiplicityError):
        lambda1_neumann(broken)
    with pytest.raises(MultiplicityError):
        sobolev_constant(broken, 2.0)
    with pytest.raises(ConvergenceError):
        lambda1_neumann(assemble(WeightSpec(), build_mesh((0, 1), 256)), max_iter=1)


@settings(max_examples=30)
@given(st.integers(0, 2 ** 31), st.floats(0.0, 0.9))
def test_lambda1_monotone_in_transmissibility(seed, cut):
    ops = assemble(WeightSpec("power", alpha=1.0, beta=0.5), build_mesh((0, 1), 40, 2.0))
    rng = np.random.default_rng(seed)
    factor = 1.0 - cut * rng.uniform(0, 1, ops.trans.size)
    weaker = dataclasses.replace(ops, trans=ops.trans * factor)
    assert lambda1_neumann(weaker).lambda1 <= lambda1_neumann(ops).lambda1 * (1 + 1e-12)


def test_rayleigh_residual_of_eigenvector():
    ops = assemble(WeightSpec(), build_mesh((0, 1), 64))
    res = lambda1_neumann(ops)
    assert rayleigh_residual(ops, res.vector, res.lambda1) == pytest.approx(res.residual)
    assert rayleigh_residual(ops, res.vector, 2 * res.lambda1) > 0.5


def test_sobolev_near_one_is_poincare():
    ops = assemble(WeightSpec(), build_mesh((0, 1), 256))
    est = sobolev_constant(ops, 1.001)
    assert est.best_ratio == pytest.approx(poincare_constant(ops), rel=0.02)


def test_sobolev_arguments():
    ops = assemble(WeightSpec(), build_mesh((0, 1), 32))
    with pytest.raises(ValueError):
        sobolev_constant(ops, 1.0)
    with pytest.raises(ValueError):
        sobolev_constant(ops, 2.0, mode="strong")
    with pytest.raises(ValueError):
        sobolev_constant(ops, 2.0, mode="dirichlet")


@pytest.mark.parametrize("spec", [WeightSpec(), WeightSpec.radial(3), WeightSpec("power", alpha=2.0, beta=1.5)])
@pytest.mark.parametrize("sigma", [1.5, 3.0])
def test_sobolev_above_poincare_floor(spec, sigma):
    ops = assemble(spec, build_mesh(spec.domain, 64, default_grading(spec)))
    est = sobolev_constant(ops, sigma, n_random=2)
    assert est.best_ratio >= poincare_sobolev_floor(ops, sigma) * (1 - 1e-9)


def test_sobolev_deterministic_and_monotone_history():
    ops = assemble(WeightSpec.radial(3), build_mesh((0, 1), 64, 2.0))
    a = sobolev_constant(ops, 2.5, seed=4)
    b = sobolev_constant(ops, 2.5, seed=4)
    assert a.best_ratio == b.best_ratio and a.history == b.history
    assert np.all(np.diff(a.history) >= 0)
    assert a.best_ratio > 0


def test_sobolev_modes_run():
    spec = WeightSpec()
    dops = assemble(spec, build_mesh((0, 1), 64), DIRICHLET)
    d = sobolev_constant(dops, 2.0, mode="dirichlet", n_random=1)
    w = sobolev_constant(assemble(spec, build_mesh((0, 1), 64)), 2.0, mode="weak_form", n_random=1)
    assert d.best_ratio > 0 and w.best_ratio > 0


def test_admissibility_scan_verdicts():
    spec = WeightSpec("power", alpha=2.0, beta=1.5)
    inside = sobolev_scan(spec, 3.0)
    outside = sobolev_scan(spec, 8.0)
    assert inside.verdict == "flat" and len(inside.refinement_trend) == 3
    assert outside.verdict == "likely unbounded"
    assert outside.growth[-1] > 0.25


def test_classify_trend():
    assert classify_trend([1.0, 1.02, 1.03]) == "flat"
    assert classify_trend([1.0, 1.3, 1.7]) == "likely unbounded"
    assert classify_trend([1.0, 1.15, 1.2]) == "inconclusive"
    assert classify_trend([1.0]) == "inconclusive"
    assert default_levels(32, 3, 4, 4.0) == [(32, 4.0), (128, 4.0), (512, 4.0)]


def test_phi_inequality_margin():
    ops = assemble(WeightSpec(), build_mesh((0, 1), 128))
    psi = lambda1_neumann(ops).vector
    xi = 0.8 * psi / np.max(np.abs(psi))
    ratios = [phi_inequality_margin(ops, r, 2.0, xi, 2.0) for r in (0.5, 1.0, 5.0, 20.0, 50.0)]
    assert all(math.isfinite(q) and q > 0 for q in ratios)
    assert max(ratios) < 5 * min(ratios)
    with pytest.raises(ValueError):
        phi_inequality_margin(ops, 1.0, 2.0, xi + 0.1, 2.0)
    with pytest.raises(ValueError):
        phi_inequality_margin(ops, 1.0, 2.0, np.zeros(ops.n), 2.0)


def test_phi_margin_small_amplitude_below_sobolev_constant():
    ops = assemble(WeightSpec(), build_mesh((0, 1), 128))
    psi = lambda1_neumann(ops).vector
    q = phi_inequality_margin(ops, 1.0, 2.0, 1e-4 * psi, 2.0)
    assert q <= sobolev_constant(ops, 2.0).best_ratio * (1 + 1e-3)
