"""Exact scalar arithmetic and the sparse tensor-leg operator algebra."""

from .laurent import (
    LaurentPoly,
    format_rational,
    parse_rational,
    poly_arith,
    poly_substitute,
)
from .tensor import (
    LegSpace,
    TensorOp,
    Transposition,
    embed_legs,
    extract_entry,
    fresh_label,
    identity_matrix,
    identity_op,
    leg_permute,
    mat_inverse,
    mat_mul,
    mat_transpose,
    matrix_on_leg,
    op_add,
    op_scale,
    op_substitute,
    orthogonal_transposition,
    parse_matrix_json,
    site_permute,
    symplectic_transposition,
    tau_on_leg,
    tensor_compose,
    tensor_product,
)

__all__ = [
    "LaurentPoly",
    "LegSpace",
    "TensorOp",
    "Transposition",
    "embed_legs",
    "extract_entry",
    "format_rational",
    "fresh_label",
    "identity_matrix",
    "identity_op",
    "leg_permute",
    "mat_inverse",
    "mat_mul",
    "mat_transpose",
    "matrix_on_leg",
    "op_add",
    "op_scale",
    "op_substitute",
    "orthogonal_transposition",
    "parse_matrix_json",
    "parse_rational",
    "poly_arith",
    "poly_substitute",
    "site_permute",
    "symplectic_transposition",
    "tau_on_leg",
    "tensor_compose",
    "tensor_product",
]
