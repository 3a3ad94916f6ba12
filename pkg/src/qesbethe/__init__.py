"""Quasi-exactly solvable radial potentials via a shared Bethe ansatz solver."""

from qesbethe.basic_ode import BasicEquation, GsweParams, Polynomial, from_gswe, qes_degree, relative_residual, residual, to_gswe
from qesbethe.bethe import BetheSolution, SolverConfig, bae_residual_vec, c0_from_roots, solve_bae, solve_joint
from qesbethe.errors import QesError
from qesbethe.models import ModelKind, ModelSpec, QesLevel, energy_of, solve_level
from qesbethe.oracle import invariant_matrix, oracle_solutions, poly_roots

__all__ = [
    "BasicEquation",
    "BetheSolution",
    "GsweParams",
    "ModelKind",
    "ModelSpec",
    "Polynomial",
    "QesError",
    "QesLevel",
    "SolverConfig",
    "bae_residual_vec",
    "c0_from_roots",
    "energy_of",
    "from_gswe",
    "invariant_matrix",
    "oracle_solutions",
    "poly_roots",
    "qes_degree",
    "relative_residual",
    "residual",
    "solve_bae",
    "solve_joint",
    "solve_level",
    "to_gswe",
]

__version__ = "0.1.0"
