"""Bethe vectors of the trigonometric six-vertex model, their on-shell
scalar products by direct operator algebra, and continuous families of
single-determinant representations of the same quantities."""

from .params import Boundary, ModelParams
from .weights import PoleError, VariableSet, substitute, weight_a, weight_b, weight_c
from .linalg import SingularMatrixError, lu_determinant, lu_solve
from .operators import (
    bethe_vector,
    double_row_monodromy,
    extract_quad,
    k_matrices,
    monodromy,
    operator_quad,
    oracle_scalar_product,
    pseudo_vacuum,
    r_matrix,
    transfer_matrix,
)
from .solver import (
    BetheSolution,
    ba_residual_open,
    ba_residual_twisted,
    solve_newton,
    validate_solution,
)
from .detrep import (
    EvalPoint,
    build_V,
    build_Vi,
    coeff_open,
    coeff_permuted,
    coeff_twisted,
    family_scalar_product,
    funcrel_residual,
    prefactor_open,
    prefactor_twisted,
    scalar_product_det,
)
from .pipeline import ScalarProductReport, VerifyTolerances, verify_model, verify_solution

__version__ = "0.1.0"

__all__ = [
    "Boundary",
    "ModelParams",
    "PoleError",
    "VariableSet",
    "substitute",
    "weight_a",
    "weight_b",
    "weight_c",
    "SingularMatrixError",
    "lu_determinant",
    "lu_solve",
    "bethe_vector",
    "double_row_monodromy",
    "extract_quad",
    "k_matrices",
    "monodromy",
    "operator_quad",
    "oracle_scalar_product",
    "pseudo_vacuum",
    "r_matrix",
    "transfer_matrix",
    "BetheSolution",
    "ba_residual_open",
    "ba_residual_twisted",
    "solve_newton",
    "validate_solution",
    "EvalPoint",
    "build_V",
    "build_Vi",
    "coeff_open",
    "coeff_permuted",
    "coeff_twisted",
    "family_scalar_product",
    "funcrel_residual",
    "prefactor_open",
    "prefactor_twisted",
    "scalar_product_det",
    "ScalarProductReport",
    "VerifyTolerances",
    "verify_model",
    "verify_solution",
]
