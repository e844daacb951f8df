"""Exact fields, matrices and integer lattices."""

from .field import QQ, FieldElem, FieldError, NumberField, check_irreducible
from .lattice import (
    Lattice,
    clear_denominators,
    hnf,
    hnf_with_transform,
    integer_kernel,
    saturate,
    smith_invariants,
    snf,
)
from .linalg import AffineSolution, det, exact_solve, inverse, nullspace, rank, rref
from .matrix import DimensionError, Matrix, block_matrix

__all__ = [
    "QQ", "FieldElem", "FieldError", "NumberField", "check_irreducible",
    "Lattice", "clear_denominators", "hnf", "hnf_with_transform", "integer_kernel",
    "saturate", "smith_invariants", "snf",
    "AffineSolution", "det", "exact_solve", "inverse", "nullspace", "rank", "rref",
    "DimensionError", "Matrix", "block_matrix",
]
