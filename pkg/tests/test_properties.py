"""Hypothesis-driven versions of the solver invariants (the acceptance suite runs 100 seeded pairs each)."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

import pairs
from wpme.mesh import apply_stiffness, assemble, build_mesh, norm
from wpme.solver import SolverConfig, signed_power, step
from wpme.weights import WeightSpec

seeds = st.integers(0, 2 ** 32 - 1)


@pytest.mark.parametrize("name", sorted(pairs.SUITES))
@settings(max_examples=15)
@given(seed=seeds)
def test_paired_invariant(name, seed):
    assert pairs.SUITES[name](np.random.default_rng(seed)) <= 0


fields = arrays(np.float64, 16, elements=st.floats(-5.0, 5.0))


@given(fields, st.floats(1.1, 5.0), st.floats(1e-6, 10.0))
def test_step_conserves_mass_and_contracts(u, m, dt):
    ops = assemble(WeightSpec("power", alpha=1.0, beta=0.5), build_mesh((0, 1), 16, 2.0))
    v, stats = step(ops, SolverConfig(m=m), u, dt)
    before = ops.cell_mass @ u
    assert abs(ops.cell_mass @ v - before) <= 1e-12 * (1 + np.abs(ops.cell_mass * u).sum())
    assert np.max(np.abs(v)) <= np.max(np.abs(u)) + 1e-10
    assert norm(ops, v, 1) <= norm(ops, u, 1) + 1e-10


@given(fields, st.floats(1.1, 5.0))
def test_signed_power_odd_and_monotone(u, m):
    assert np.array_equal(signed_power(-u, m), -signed_power(u, m))
    s = np.sort(u)
    assert np.all(np.diff(signed_power(s, m)) >= 0)


@given(fields)
def test_stiffness_pairs_nonnegative_against_monotone_maps(u):
    """sum_i (A phi(u))_i psi(u_i) >= 0 for monotone phi, psi: the discrete source of non-expansivity."""
    ops = assemble(WeightSpec.radial(3), build_mesh((0, 1), 16, 2.0))
    val = apply_stiffness(ops, signed_power(u, 2.0)) @ np.tanh(u)
    assert val >= -1e-9 * (1 + np.sum(ops.trans) * np.max(np.abs(u)) ** 2)
