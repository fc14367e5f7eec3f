"""Exact arithmetic substrate: rationals, polynomials, binary forms, series."""

from fractions import Fraction

from .binary import (
    INFINITY,
    BinaryForm,
    P1Point,
    binary_form_discriminant,
    linear_factors,
    ord_at,
    resultant,
    roots,
)
from .parse import parse_poly, parse_rational, parse_series
from .poly import Poly, is_squarefree, poly_gcd, poly_lcm, squarefree_part
from .ratfunc import RatFunc
from .series import DEFAULT_ORDER, TruncatedSeries

ExactScalar = Fraction

__all__ = [
    "BinaryForm",
    "DEFAULT_ORDER",
    "ExactScalar",
    "Fraction",
    "INFINITY",
    "P1Point",
    "Poly",
    "RatFunc",
    "TruncatedSeries",
    "binary_form_discriminant",
    "is_squarefree",
    "linear_factors",
    "ord_at",
    "parse_poly",
    "parse_rational",
    "parse_series",
    "poly_gcd",
    "poly_lcm",
    "resultant",
    "roots",
    "squarefree_part",
]
