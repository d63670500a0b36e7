"""Exact harmonic analysis of bidegree (p, q) spherical harmonics on the sphere of C^n."""

from __future__ import annotations

from hpqkit.exact import (
    BiPoly,
    DimensionMismatch,
    GaussRational,
    PolyParseError,
    RatMatrix,
    laplacian,
    mat_kernel,
    parse_poly,
    render_poly,
    scale_radial,
    substitute_linear,
)
from hpqkit.harmonics import (
    Bidegree,
    HarmonicSpace,
    NotOnSphere,
    SphereContext,
    SpherePoint,
    ZonalKernel,
    bidegree_support,
    harmonic_basis,
    harmonic_components,
    inner_product,
    integrate,
    integrate_monomial,
    project_bidegree,
    sphere_restriction_equal,
    zonal_kernel,
)
from hpqkit.kernels import BACKEND
from hpqkit.patterns import (
    ClassificationError,
    PatternBox,
    PatternFamily,
    classify_pattern,
    closure_box,
    combine_points,
    is_pattern_box,
    m_ladder_closure,
    parse_family,
    parse_pattern,
)
from hpqkit.products import (
    AlgebraCheck,
    ProductSupportReport,
    is_algebra_exact,
    product_space_support,
    product_sweep,
    uinv_span_pattern,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AlgebraCheck",
    "BiPoly",
    "Bidegree",
    "ClassificationError",
    "DimensionMismatch",
    "GaussRational",
    "HarmonicSpace",
    "NotOnSphere",
    "PatternBox",
    "PatternFamily",
    "PolyParseError",
    "ProductSupportReport",
    "RatMatrix",
    "SphereContext",
    "SpherePoint",
    "ZonalKernel",
    "bidegree_support",
    "classify_pattern",
    "closure_box",
    "combine_points",
    "harmonic_basis",
    "harmonic_components",
    "inner_product",
    "integrate",
    "integrate_monomial",
    "is_algebra_exact",
    "is_pattern_box",
    "laplacian",
    "m_ladder_closure",
    "mat_kernel",
    "parse_family",
    "parse_pattern",
    "parse_poly",
    "product_space_support",
    "product_sweep",
    "render_poly",
    "scale_radial",
    "sphere_restriction_equal",
    "substitute_linear",
    "uinv_span_pattern",
    "zonal_kernel",
]
