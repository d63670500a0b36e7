"""Exact arithmetic: Gaussian rationals, bidegree polynomials, linear algebra."""

from hpqkit.exact.gaussrat import I, ONE, ZERO, GaussRational, gr
from hpqkit.exact.linalg import InconsistentSystem, RatMatrix, mat_kernel
from hpqkit.exact.parse import PolyParseError, parse_gauss, parse_point, parse_poly, render_poly
from hpqkit.exact.poly import (
    BiPoly,
    DimensionMismatch,
    laplacian,
    monomials_of_bidegree,
    poly_mul,
    scale_radial,
    substitute_linear,
)

__all__ = [
    "BiPoly",
    "DimensionMismatch",
    "GaussRational",
    "I",
    "InconsistentSystem",
    "ONE",
    "PolyParseError",
    "RatMatrix",
    "ZERO",
    "gr",
    "laplacian",
    "mat_kernel",
    "monomials_of_bidegree",
    "parse_gauss",
    "parse_point",
    "parse_poly",
    "poly_mul",
    "render_poly",
    "scale_radial",
    "substitute_linear",
]
