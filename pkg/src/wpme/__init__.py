"""Finite-volume solver and verification harness for the weighted porous medium equation

    rho_nu(x) u_t = div(rho_mu(x) grad(|u|^(m-1) u))

on an interval, with smoothing-rate, decay-rate and Sobolev-admissibility checks.
"""
from .weights import WeightSpec, SigmaRange, admissible_sigma, sobolev_exponent
from .mesh import Mesh1D, DiscreteOperators, assemble, build_mesh
from .solver import SolverConfig, Trajectory, evolve, step, signed_power
from .config import ExperimentConfig

__all__ = ["WeightSpec", "SigmaRange", "admissible_sigma", "sobolev_exponent", "Mesh1D",
           "DiscreteOperators", "assemble", "build_mesh", "SolverConfig", "Trajectory", "evolve",
           "step", "signed_power", "ExperimentConfig"]
__version__ = "0.1.0"
