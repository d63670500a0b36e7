"""JSON forms of exact values, polynomials, patterns and reports.

Rationals are strings ``"num/den"``, Gaussian rationals ``{"re": .., "im": ..}``.
Every ``*_to_json`` here has a matching ``*_from_json``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from hpqkit.exact.gaussrat import GaussRational
from hpqkit.exact.parse import render_poly
from hpqkit.exact.poly import BiPoly
from hpqkit.harmonics import Bidegree, SphereContext
from hpqkit.mc import QuadEstimate
from hpqkit.patterns import PatternBox
from hpqkit.products import AlgebraCheck, ProductSupportReport


def rat_to_json(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def rat_from_json(s: str) -> Fraction:
    return Fraction(s)


def gauss_to_json(c) -> dict:
    c = GaussRational.coerce(c)
    return {"re": rat_to_json(c.re), "im": rat_to_json(c.im)}


def gauss_from_json(d: dict) -> GaussRational:
    return GaussRational(rat_from_json(d["re"]), rat_from_json(d["im"]))


def bd_to_json(b) -> list[int]:
    return [int(b[0]), int(b[1])]


def bd_from_json(v) -> Bidegree:
    return Bidegree(int(v[0]), int(v[1]))


def poly_to_json(f: BiPoly) -> dict:
    n = f.n
    return {
        "n": n,
        "text": render_poly(f),
        "terms": [
            {"alpha": list(k[:n]), "beta": list(k[n:]), "coeff": gauss_to_json(c)}
            for k, c in f.items()
        ],
    }


def poly_from_json(d: dict) -> BiPoly:
    n = int(d["n"])
    terms = {}
    for t in d["terms"]:
        key = tuple(t["alpha"]) + tuple(t["beta"])
        if len(key) != 2 * n:
            raise ValueError("exponent length does not match n")
        terms[key] = gauss_from_json(t["coeff"])
    return BiPoly(n, terms)


def pattern_to_json(omega: PatternBox) -> dict:
    return {"maxdeg": omega.maxdeg, "members": [bd_to_json(b) for b in omega.sorted()], "text": str(omega)}


def pattern_from_json(d: dict) -> PatternBox:
    return PatternBox(int(d["maxdeg"]), (bd_from_json(v) for v in d["members"]))


def _bds(xs) -> list[list[int]]:
    return [bd_to_json(b) for b in sorted(xs)]


def report_to_json(r: ProductSupportReport) -> dict:
    return {
        "n": r.ctx.n,
        "left": bd_to_json(r.left),
        "right": bd_to_json(r.right),
        "rule": r.rule,
        "support": _bds(r.support),
        "predicted": _bds(r.predicted),
        "match": r.match,
        "missing": _bds(r.missing),
        "extra": _bds(r.extra),
        "pairs_checked": r.pairs_checked,
        "witness_components": [
            {"bidegree": bd_to_json(b), "component": poly_to_json(w)}
            for b, w in sorted(r.witness_components.items())
        ],
    }


def report_from_json(d: dict) -> ProductSupportReport:
    support = {bd_from_json(v) for v in d["support"]}
    predicted = {bd_from_json(v) for v in d["predicted"]}
    wit = {bd_from_json(e["bidegree"]): poly_from_json(e["component"]) for e in d["witness_components"]}
    return ProductSupportReport(
        SphereContext(int(d["n"])),
        bd_from_json(d["left"]),
        bd_from_json(d["right"]),
        support,
        predicted,
        bool(d["match"]),
        wit,
        d.get("rule", "minus"),
        int(d.get("pairs_checked", 0)),
    )


def algebra_check_to_json(a: AlgebraCheck) -> dict:
    return {
        "is_algebra": a.is_algebra,
        "maxdeg": a.maxdeg,
        "pair": [bd_to_json(b) for b in a.pair] if a.pair else None,
        "escaping": bd_to_json(a.escaping) if a.escaping else None,
        "pairs_checked": a.pairs_checked,
        "closure": a.closure,
    }


def algebra_check_from_json(d: dict) -> AlgebraCheck:
    pair = tuple(bd_from_json(b) for b in d["pair"]) if d.get("pair") else None
    esc = bd_from_json(d["escaping"]) if d.get("escaping") else None
    return AlgebraCheck(bool(d["is_algebra"]), int(d["maxdeg"]), pair, esc,
                        int(d.get("pairs_checked", 0)), d.get("closure", "uniform"))


def complex_to_json(z: complex) -> dict:
    return {"re": z.real, "im": z.imag}


def quad_to_json(q: QuadEstimate) -> dict:
    return {"value": complex_to_json(q.value), "stderr": q.stderr, "samples": q.samples}


def quad_from_json(d: dict) -> QuadEstimate:
    v = d["value"]
    return QuadEstimate(complex(v["re"], v["im"]), float(d["stderr"]), int(d["samples"]))


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
