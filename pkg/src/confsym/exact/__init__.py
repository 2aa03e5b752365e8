"""Exact rationals, polynomials, jets and linear algebra."""

from .jet import Jet, JetDomainError, OrderExhausted, jet_arith
from .linalg import ExactMatrix, exact_nullspace, rank, sparse_nullspace
from .poly import DimensionError, MultiPoly, coordinates, poly_arith
from .scalar import ONE, ZERO, Q, as_q, fmt_q

__all__ = [
    "DimensionError",
    "ExactMatrix",
    "Jet",
    "JetDomainError",
    "MultiPoly",
    "ONE",
    "OrderExhausted",
    "Q",
    "ZERO",
    "as_q",
    "coordinates",
    "exact_nullspace",
    "fmt_q",
    "jet_arith",
    "poly_arith",
    "rank",
    "sparse_nullspace",
]
