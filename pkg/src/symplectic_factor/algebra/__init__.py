"""Exact scalars (Q(i), polynomials over Q(i), dual numbers) and dense matrices."""

from .dual import Dual
from .gaussian import GaussianRational, ONE, ZERO, I, Rational, rational, to_gaussian, random_gaussian
from .matrix import (
    Matrix, ShapeTag, mat_mul, vec_mat, transpose, is_symmetric, is_unitriangular, is_triangular,
    is_diagonal, has_shape, invert_triangular, unit_inverse, exact_rank, determinant, nullspace,
    solve_linear, evaluate_matrix, row_echelon,
)
from .parse import ParseError, parse_scalar, print_scalar
from .poly import MultiPoly, NotAUnitError

__all__ = [
    "Dual", "GaussianRational", "ONE", "ZERO", "I", "Rational", "rational", "to_gaussian", "random_gaussian",
    "Matrix", "ShapeTag", "mat_mul", "vec_mat", "transpose", "is_symmetric", "is_unitriangular",
    "is_triangular", "is_diagonal", "has_shape", "invert_triangular", "unit_inverse", "exact_rank",
    "determinant", "nullspace", "solve_linear", "evaluate_matrix", "row_echelon",
    "ParseError", "parse_scalar", "print_scalar", "MultiPoly", "NotAUnitError",
]
