from .scalars import DiscriminantMismatch, QuadScalar, Rational, parse_quad
from .exppoly import ExpPolynomial, NotClosedFormError, poly_arith, poly_diff
from .series import GWSeries, series_arith
from .linalg import (
    ExactMatrix,
    SingularMatrixError,
    eigen_small,
    exact_solve,
    sort_spectrum,
)

__all__ = [
    "DiscriminantMismatch",
    "QuadScalar",
    "Rational",
    "parse_quad",
    "ExpPolynomial",
    "NotClosedFormError",
    "poly_arith",
    "poly_diff",
    "GWSeries",
    "series_arith",
    "ExactMatrix",
    "SingularMatrixError",
    "eigen_small",
    "exact_solve",
    "sort_spectrum",
]
