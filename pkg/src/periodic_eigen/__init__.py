"""Positive multiplicative eigenfunctions of periodic graph Schroedinger operators."""
from .choquet import DiscreteMeasure, decompose, synthesize
from .dispersion import find_lambda0, lambda_at, lambda_gradient, lambda_value, spectral_lower_bound
from .eigenfunction import build_eigenfunction, check_multiplicative, residual
from .errors import PeriodicEigenError
from .floquet import assemble_q, ground_state_operator, is_irreducible
from .graph import Edge, PeriodicGraph, WindowFunction, degree, harnack_bound, validate
from .levelset import radial_solve, trace_level_set
from .perron import perron_eigen
from .quotient import Sublattice, factor, intertwine_check

__all__ = [
    "DiscreteMeasure", "Edge", "PeriodicEigenError", "PeriodicGraph", "Sublattice",
    "WindowFunction", "assemble_q", "build_eigenfunction", "check_multiplicative", "decompose",
    "degree", "factor", "find_lambda0", "ground_state_operator", "harnack_bound",
    "intertwine_check", "is_irreducible", "lambda_at", "lambda_gradient", "lambda_value",
    "perron_eigen", "radial_solve", "residual", "spectral_lower_bound", "synthesize",
    "trace_level_set", "validate",
]
