from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from hpqkit.exact import (
    BiPoly,
    DimensionMismatch,
    GaussRational,
    PolyParseError,
    RatMatrix,
    laplacian,
    mat_kernel,
    parse_poly,
    poly_mul,
    render_poly,
    scale_radial,
    substitute_linear,
)

from conftest import I, bipolys, exact_unitaries, gauss, nonzero_gauss


def P(text: str, n: int = 2) -> BiPoly:
    return parse_poly(text, n)


def to_sympy(f: BiPoly):
    n = f.n
    z = sp.symbols(f"z1:{n + 1}")
    w = sp.symbols(f"w1:{n + 1}")
    expr = 0
    for key, c in f.items():
        term = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(c.im.numerator, c.im.denominator)
        for j in range(n):
            term *= z[j] ** key[j] * w[j] ** key[n + j]
        expr += term
    return sp.expand(expr), z, w


# --- poly_mul -----------------------------------------------------------------


def test_mul_monomials():
    assert poly_mul(P("z1"), P("w2")) == P("z1*w2")
    assert P("z1*w2").coeff((1, 0), (0, 1)) == 1


def test_mul_by_zero():
    assert (P("z1 + 3*w2") * BiPoly(2)).is_zero


def test_difference_of_squares():
    assert P("z1 + z2") * P("z1 - z2") == P("z1^2 - z2^2")


def test_mul_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        poly_mul(P("z1", 2), P("z1", 3))


@given(bipolys(n=2), bipolys(n=2))
def test_mul_matches_sympy(f, g):
    (fe, z, w), (ge, _, _) = to_sympy(f), to_sympy(g)
    assert sp.expand(to_sympy(f * g)[0] - fe * ge) == 0


def test_bidegree_of_product():
    f, g = P("z1^2*w2 + z2^2*w1"), P("z1*w1^2")
    assert (f * g).bidegrees() == {(3, 3)}


# --- laplacian ----------------------------------------------------------------


@pytest.mark.parametrize(
    "text, expected",
    [("z1*w2", "0"), ("z1*w1", "4"), ("z1^2*w1", "8*z1")],
)
def test_laplacian_examples(text, expected):
    assert laplacian(P(text)) == P(expected)


@given(bipolys())
def test_laplacian_matches_sympy(f):
    expr, z, w = to_sympy(f)
    ref = sp.expand(4 * sum(sp.diff(expr, z[j], w[j]) for j in range(f.n)))
    assert sp.expand(to_sympy(laplacian(f))[0] - ref) == 0


@given(bipolys(), bipolys(), gauss)
def test_laplacian_linear(f, g, c):
    if f.n != g.n:
        g = BiPoly(f.n)
    assert laplacian(f + g.scale(c)) == laplacian(f) + laplacian(g).scale(c)


def test_laplacian_of_each_modulus_square():
    for n in (1, 2, 3, 4):
        for j in range(1, n + 1):
            assert laplacian(BiPoly.z(n, j) * BiPoly.w(n, j)) == BiPoly.const(n, 4)


# --- scale_radial -------------------------------------------------------------


def test_scale_radial_examples():
    assert scale_radial(P("z1^2"), Fraction(1, 2)) == P("1/4*z1^2")
    f = P("z1*w2 + 1")
    assert scale_radial(f, 1) == f
    assert scale_radial(f, Fraction(1, 3)) == P("1/9*z1*w2 + 1")


# --- substitute_linear --------------------------------------------------------


def test_substitute_examples():
    U = exact_unitaries(2)
    assert substitute_linear(P("z1"), U["swap"]) == P("z2")
    assert substitute_linear(P("z1"), U["phase"]) == P("(0+1i)*z1")
    assert substitute_linear(P("z1"), U["rot345"]) == P("3/5*z1 + 4/5*z2")


def test_substitute_conjugates_the_w_side():
    U = exact_unitaries(2)["phase"]
    assert substitute_linear(P("w1"), U) == P("(0-1i)*w1")


def test_substitute_rejects_non_unitary():
    with pytest.raises(ValueError):
        substitute_linear(P("z1"), RatMatrix([[2, 0], [0, 1]]))


@pytest.mark.parametrize("name", ["swap", "phase", "rot345"])
@given(f=bipolys(n=3), g=bipolys(n=3))
def test_substitute_is_ring_hom_with_inverse(name, f, g):
    U = exact_unitaries(3)[name]
    s = lambda h: substitute_linear(h, U)  # noqa: E731
    assert s(f * g) == s(f) * s(g)
    assert s(f + g) == s(f) + s(g)
    assert substitute_linear(s(f), U.conj_transpose()) == f
    assert s(f).bidegrees() == f.bidegrees()


# --- GaussRational ------------------------------------------------------------


@given(gauss, gauss, gauss)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == 0


@given(nonzero_gauss)
def test_inverse(a):
    assert a * a.inverse() == 1
    assert a / a == 1


@given(gauss, gauss)
def test_conj_and_modulus(a, b):
    assert (a * b).conj() == a.conj() * b.conj()
    assert (a * a.conj()) == a.abs2()
    assert complex(a * b) == pytest.approx(complex(a) * complex(b))


def test_i_squared():
    assert I * I == -1


@given(bipolys(), bipolys())
def test_conj_is_involutive_ring_hom(f, g):
    if f.n != g.n:
        g = BiPoly(f.n)
    assert (f * g).conj() == f.conj() * g.conj()
    assert f.conj().conj() == f


# --- mat_kernel ---------------------------------------------------------------


def test_kernel_examples():
    assert mat_kernel(RatMatrix.identity(3)) == []
    assert len(mat_kernel(RatMatrix.zeros(2, 2))) == 2
    (v,) = mat_kernel(RatMatrix([[1, 1]]))
    assert v[0] == -v[1] and v[0] != 0


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_kernel_against_sympy(rows):
    M = RatMatrix(rows)
    ker = mat_kernel(M)
    for v in ker:
        assert all(x == 0 for x in M.apply(v))
    assert len(ker) == len(sp.Matrix(rows).nullspace())
    assert M.rank() + len(ker) == 4


def test_kernel_complex_entries():
    M = RatMatrix([[1, I], [I, -1]])
    (v,) = mat_kernel(M)
    assert all(x == 0 for x in M.apply(v))


# --- parse / render -----------------------------------------------------------


def test_parse_examples():
    assert P("z1*w2") == BiPoly.monomial(2, (1, 0), (0, 1))
    f = parse_poly("(1/2+1/2i)*z1^2", 2)
    assert f == BiPoly.monomial(2, (2, 0), (0, 0), GaussRational(Fraction(1, 2), Fraction(1, 2)))
    assert P("z1*w1 - 1/2") == BiPoly.monomial(2, (1, 0), (1, 0)) - Fraction(1, 2)


def test_parse_ignores_whitespace():
    assert P(" z1 * w2 +  3 ") == P("z1*w2+3")


@pytest.mark.parametrize("bad", ["z3", "z0", "z1*", "x1", "z1^", "(1+2)*z1", "1/0"])
def test_parse_errors(bad):
    with pytest.raises((PolyParseError, ZeroDivisionError)):
        parse_poly(bad, 2)


def test_parse_error_carries_position():
    with pytest.raises(PolyParseError) as exc:
        parse_poly("z1 + + z2", 2)
    assert "position" in str(exc.value) or "col" in str(exc.value)


@given(bipolys())
def test_render_parse_round_trip(f):
    assert parse_poly(render_poly(f), f.n) == f


def test_grlex_rendering_is_deterministic():
    f = P("w1 + z2 + z1 + 1 + z1*w1")
    assert render_poly(f) == render_poly(P("z1*w1 + 1 + z1 + z2 + w1"))
