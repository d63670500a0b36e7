from __future__ import annotations

import json
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from hpqkit.exact import GaussRational
from hpqkit.mc import QuadEstimate
from hpqkit.patterns import PatternBox, box_points, closure_box
from hpqkit.products import is_algebra_exact, product_space_support
from hpqkit.patterns import PatternFamily
from hpqkit.serialize import (
    algebra_check_from_json,
    algebra_check_to_json,
    dumps,
    gauss_from_json,
    gauss_to_json,
    pattern_from_json,
    pattern_to_json,
    poly_from_json,
    poly_to_json,
    quad_from_json,
    quad_to_json,
    rat_to_json,
    report_from_json,
    report_to_json,
)

from conftest import bipolys, gauss


def through_text(obj):
    return json.loads(dumps(obj))


def test_rational_strings():
    assert rat_to_json(Fraction(-3, 4)) == "-3/4"
    assert rat_to_json(2) == "2/1"
    assert gauss_to_json(GaussRational(Fraction(1, 2), -1)) == {"re": "1/2", "im": "-1/1"}


@given(gauss)
def test_gauss_round_trip(c):
    assert gauss_from_json(through_text(gauss_to_json(c))) == c


@given(bipolys())
def test_poly_round_trip(f):
    assert poly_from_json(through_text(poly_to_json(f))) == f


@given(st.integers(0, 6).flatmap(lambda D: st.sets(st.sampled_from(box_points(D))).map(lambda s: PatternBox(D, s))))
def test_pattern_round_trip(b):
    assert pattern_from_json(through_text(pattern_to_json(b))) == b


def test_report_round_trip():
    for n, l, r in [(2, (2, 1), (2, 1)), (3, (1, 1), (1, 0)), (1, (1, 0), (0, 1))]:
        rep = product_space_support(n, l, r)
        back = report_from_json(through_text(report_to_json(rep)))
        assert back.support == rep.support and back.predicted == rep.predicted
        assert back.match == rep.match and back.witness_components == rep.witness_components
        assert report_to_json(back) == report_to_json(rep)


def test_algebra_check_round_trip():
    for omega in [PatternFamily("plurih").box(3), closure_box(PatternBox(4, [(1, 0)]))]:
        chk = is_algebra_exact(2, omega)
        assert algebra_check_from_json(through_text(algebra_check_to_json(chk))) == chk


def test_quad_round_trip():
    q = QuadEstimate(complex(0.25, -1e-3), 0.0015, 100000)
    assert quad_from_json(through_text(quad_to_json(q))) == q


def test_dumps_is_stable():
    rep = report_to_json(product_space_support(2, (1, 0), (0, 1)))
    assert dumps(rep) == dumps(through_text(rep))
