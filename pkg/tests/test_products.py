from __future__ import annotations

import pytest

from hpqkit.exact import BiPoly, parse_poly
from hpqkit.exact.poly import monomials_of_bidegree
from hpqkit.harmonics import Bidegree, harmonic_basis, project_bidegree
from hpqkit.patterns import PatternBox, PatternFamily, box_points, combine_points
from hpqkit.products import (
    cstar_equivalence_check,
    is_algebra_exact,
    product_space_support,
    product_sweep,
    uinv_span_pattern,
)


def gram_route_support(n, left, right):
    """Oracle: project every basis product with the Gram solve, no Fischer formula."""
    a, b = left[0] + right[0], left[1] + right[1]
    targets = [(a - j, b - j) for j in range(min(a, b) + 1)]
    out = set()
    for f in harmonic_basis(n, left).basis:
        for g in harmonic_basis(n, right).basis:
            for t in targets:
                if t not in out and not project_bidegree(n, f * g, t).is_zero:
                    out.add(t)
    return out


def test_product_examples():
    r = product_space_support(2, (1, 0), (0, 1))
    assert r.support == {(1, 1), (0, 0)} and r.match
    r = product_space_support(3, (1, 1), (1, 1))
    assert r.support == {(2, 2), (1, 1), (0, 0)} and r.match
    r = product_space_support(2, (2, 1), (2, 1))
    assert (3, 1) in r.predicted and (3, 1) not in r.support
    assert not r.match and r.missing == [(3, 1)]


@pytest.mark.parametrize(
    "n, left, right",
    [(2, (1, 0), (0, 1)), (2, (2, 1), (2, 1)), (2, (1, 1), (1, 1)), (3, (1, 1), (1, 1)), (3, (2, 1), (0, 2)), (1, (2, 0), (0, 1))],
)
def test_support_matches_gram_oracle(n, left, right):
    assert product_space_support(n, left, right).support == gram_route_support(n, left, right)


def test_witnesses_are_nonzero_components():
    r = product_space_support(3, (2, 1), (1, 1))
    assert set(r.witness_components) == r.support
    for bd, w in r.witness_components.items():
        assert not w.is_zero and w.bidegrees() == {tuple(bd)}
        assert w.laplacian().is_zero


def test_exhaustive_scan_agrees():
    for left, right in [((1, 1), (1, 1)), ((2, 1), (1, 2)), ((2, 0), (0, 2))]:
        quick = product_space_support(2, left, right)
        full = product_space_support(2, left, right, exhaustive=True)
        assert quick.support == full.support
        assert full.pairs_checked >= quick.pairs_checked


def test_max_total_cuts_both_sides():
    r = product_space_support(3, (2, 1), (1, 2), max_total=4)
    assert all(b.total <= 4 for b in r.support | r.predicted)
    assert r.match


def test_sweep_invariants_n3():
    for r in product_sweep(3, 3):
        assert r.match, (r.left, r.right)
        (p, q), (s, t) = r.left, r.right
        for a, b in r.support:
            assert a + b <= p + q + s + t
            assert a - b == (p + s) - (q + t)


def test_support_symmetric():
    by_pair = {(r.left, r.right): r.support for r in product_sweep(2, 3)}
    for (x, y), s in by_pair.items():
        assert by_pair[(y, x)] == s


def test_n1_zero_spaces():
    r = product_space_support(1, (1, 0), (0, 1))
    assert r.support == {(0, 0)}
    assert product_space_support(1, (1, 1), (1, 0)).support == set()


def test_plus_rule_never_matches_when_mu_positive():
    for r in product_sweep(3, 2, rule="plus"):
        (p, q), (s, t) = r.left, r.right
        mu = min(p + q, s + t, p + s, q + t)
        assert r.match == (mu == 0)


def test_threads_give_same_reports():
    one = product_sweep(3, 2, threads=1)
    four = product_sweep(3, 2, threads=4)
    assert [(r.left, r.right, r.support) for r in one] == [(r.left, r.right, r.support) for r in four]


# --- U-invariant span patterns ------------------------------------------------


def test_uinv_span_examples():
    assert uinv_span_pattern(2, [parse_poly("z1*w1", 2)]).members == {(1, 1), (0, 0)}
    assert uinv_span_pattern(2, [parse_poly("z1^2", 2)]).members == {(2, 0)}
    assert uinv_span_pattern(2, []).members == frozenset()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_monomials_span_everything(n):
    D = 3
    gens = [BiPoly(n, {k: 1}) for t in range(D + 1) for p in range(t + 1) for k in monomials_of_bidegree(n, p, t - p)]
    got = uinv_span_pattern(n, gens, D)
    expect = {b for b in box_points(D) if harmonic_basis(n, b).dim}
    assert got.members == expect


# --- algebra checks -----------------------------------------------------------


def test_holomorphic_box_is_algebra():
    assert is_algebra_exact(2, PatternFamily("hol").box(5))


def test_plurih_fails_at_n2_passes_at_n1():
    chk = is_algebra_exact(2, PatternFamily("plurih").box(4))
    assert not chk
    assert set(chk.pair) == {(1, 0), (0, 1)} and chk.escaping == (1, 1)
    assert is_algebra_exact(1, PatternFamily("plurih").box(4))


def test_gpq_n2_box_is_n2_algebra():
    fam = PatternFamily("GpqN2", (2, 1))
    assert is_algebra_exact(2, fam.box(6))
    # but not at n = 3, where (3,1) is forced
    chk = is_algebra_exact(3, fam.box(6))
    assert not chk and chk.escaping == (3, 1)


def test_gsigma_star_is_n2_algebra():
    assert is_algebra_exact(2, PatternFamily("GSigmaStar", ()).box(6))
    assert not is_algebra_exact(3, PatternFamily("GSigmaStar", ()).box(6))


def test_cstar_equivalence():
    for n, fam in [(2, "plurih"), (2, "hol"), (3, "full")]:
        res = cstar_equivalence_check(n, PatternFamily(fam).box(3))
        assert res["equivalent"]
        assert res["is_algebra"] == bool(is_algebra_exact(n, PatternFamily(fam).box(3)))
    res = cstar_equivalence_check(2, PatternFamily("plurih").box(3))
    assert res["uniform"].escaping == res["weak_star"].escaping == (1, 1)


def test_prediction_is_combine_points():
    r = product_space_support(3, (2, 0), (0, 2))
    assert r.predicted == combine_points((2, 0), (0, 2))
    assert all(isinstance(b, Bidegree) for b in r.support)


def test_empty_box_is_algebra():
    assert is_algebra_exact(3, PatternBox(4, []))
