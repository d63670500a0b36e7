from __future__ import annotations

import numpy as np
import pytest
import sympy as sp

from hpqkit.exact import BiPoly, parse_poly
from hpqkit.exact.poly import monomials_of_bidegree
from hpqkit.harmonics import integrate_monomial
from hpqkit.mc import (
    BallAutomorphism,
    HaarSampler,
    QuadEstimate,
    SingularAutomorphism,
    automorphism_apply,
    compose,
    haar_average_check,
    mc_integrate,
    mc_project,
    moebius_ladder_evidence,
    poly_evaluator,
)

N = 100_000


def P(text, n=2):
    return parse_poly(text, n)


def random_ball_pairs(rng, count, n):
    out = []
    while len(out) < count:
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        a *= rng.uniform(0, 0.95) / np.linalg.norm(a)
        z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        z /= np.linalg.norm(z)
        out.append((a, z))
    return out


# --- automorphisms ------------------------------------------------------------


def test_automorphism_examples():
    phi = BallAutomorphism([0.5, 0])
    assert np.allclose(phi(np.array([1, 0])), [-1, 0])
    assert np.allclose(phi(np.zeros(2)), [0.5, 0])
    z = np.array([0.6, 0.8j])
    assert np.allclose(BallAutomorphism([0, 0])(z), -z)


def test_automorphism_invariants():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3):
        for a, z in random_ball_pairs(rng, 100 // 3 + 1, n):
            phi = BallAutomorphism(a)
            assert np.allclose(phi(np.zeros(n)), a, atol=1e-12)
            assert np.allclose(phi(a), 0, atol=1e-12)
            assert np.allclose(phi(phi(z)), z, atol=1e-12)
            assert abs(np.linalg.norm(phi(z)) - 1) < 1e-12


def test_automorphism_errors():
    with pytest.raises(ValueError):
        BallAutomorphism([1.0, 0])
    with pytest.raises(ValueError):
        automorphism_apply(BallAutomorphism([0.5, 0]), np.zeros(3))
    # 1 - <z, a> = 0 cannot happen on the closed ball, so force it
    phi = BallAutomorphism([0.5, 0])
    with pytest.raises(SingularAutomorphism):
        automorphism_apply(phi, np.array([2.0, 0]))


def test_automorphism_vectorized():
    phi = BallAutomorphism([0.3, 0.4j])
    Z = HaarSampler(1, 2).sphere(50)
    rows = np.array([phi(z) for z in Z])
    assert np.allclose(phi(Z), rows)


# --- sampler ------------------------------------------------------------------


def test_unitaries_are_unitary():
    U = HaarSampler(7, 3).unitaries(2000)
    err = np.abs(U @ np.conj(np.transpose(U, (0, 2, 1))) - np.eye(3)).max()
    assert err <= 1e-12


def test_sphere_points_on_sphere():
    Z = HaarSampler(7, 4).sphere(5000)
    assert np.allclose(np.linalg.norm(Z, axis=1), 1, atol=1e-12)


def test_reproducible_and_thread_independent():
    a = HaarSampler(42, 2, threads=1).sphere(30_000)
    b = HaarSampler(42, 2, threads=4).sphere(30_000)
    c = HaarSampler(43, 2).sphere(30_000)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.array_equal(HaarSampler(42, 2, 3).unitaries(20_000), HaarSampler(42, 2, 1).unitaries(20_000))


# --- integration --------------------------------------------------------------


def test_quad_estimate():
    q = QuadEstimate.from_values(np.ones(10))
    assert q.value == 1 and q.stderr == 0 and q.samples == 10
    with pytest.raises(ValueError):
        QuadEstimate.from_values(np.ones(1))
    assert QuadEstimate(0.01, 0.001, 10).nonzero()
    assert not QuadEstimate(0.0005, 0.0, 10).nonzero()
    assert not QuadEstimate(0.01, 0.01, 10).nonzero()


def test_integrate_examples():
    s = HaarSampler(42, 2)
    q = mc_integrate(lambda Z: np.ones(len(Z)), s, 1000)
    assert q.value == 1 and q.stderr == 0
    assert mc_integrate(P("z1*w1"), s, N).agrees(0.5)
    assert mc_integrate(P("z1^2*w1^2"), s, N).agrees(1 / 3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_integrate_monomials(n):
    s = HaarSampler(42, n)
    Z = s.sphere(N)
    fails = []
    for a in range(4):
        for b in range(4):
            for key in monomials_of_bidegree(n, a, b):
                f = BiPoly(n, {key: 1})
                q = QuadEstimate.from_values(poly_evaluator(f)(Z))
                exact = integrate_monomial(n, key[:n], key[n:])
                if not q.agrees(float(exact)):
                    fails.append(key)
    assert not fails


def test_haar_average():
    s = HaarSampler(42, 2)
    chk = haar_average_check(P("z1^2*w1^2"), [0.6, 0.8j], s, N)
    assert chk.exact == pytest.approx(1 / 3) and chk.agrees
    chk = haar_average_check(P("z1"), [1, 0], s, N)
    assert chk.exact == 0 and chk.agrees
    chk = haar_average_check(P("3"), [1, 0], s, 100)
    assert chk.mc.value == 3 and chk.mc.stderr == 0
    with pytest.raises(ValueError):
        haar_average_check(P("z1"), [1, 1], s, 10)


def test_column_phase_invariance():
    s = HaarSampler(5, 2)
    U = s.unitaries(N)
    z = np.array([1, 0])
    f = poly_evaluator(P("z1^2*w1*w2 + z1*w1"))
    base = QuadEstimate.from_values(f(U @ z))
    phased = QuadEstimate.from_values(f((U * np.exp(1j * np.array([0.7, -1.3]))) @ z))
    assert abs(base.value - phased.value) <= 4 * np.hypot(base.stderr, phased.stderr)


# --- projections --------------------------------------------------------------


def test_project_examples():
    s = HaarSampler(42, 2)
    assert mc_project(P("z1"), (1, 0), 2, s, N).agrees(1.0)
    assert mc_project(P("z1"), (0, 1), 2, s, N).agrees(0.0)


def test_moebius_component_matches_series():
    # oracle: z1 o phi_a restricted to the z1 axis is (1/2 - t)/(1 - t/2)
    t = sp.symbols("t")
    coeff = sp.series((sp.Rational(1, 2) - t) / (1 - t / 2), t, 0, 3).removeO().coeff(t, 2)
    assert coeff == sp.Rational(-3, 8)
    s = HaarSampler(42, 2)
    est = mc_project(compose(P("z1"), BallAutomorphism([0.5, 0])), (2, 0), 2, s, N)
    assert est.nonzero() and est.agrees(float(coeff))


def test_ladder_evidence():
    s = HaarSampler(42, 2)
    rep = moebius_ladder_evidence(1, 0, [0.5, 0], 2, s, 50_000)
    assert rep.evidence == {(0, 0): True, (2, 0): True}
    assert rep.antiholomorphic_zero and rep.ok


def test_ladder_unitary_case():
    s = HaarSampler(42, 2)
    rep = moebius_ladder_evidence(1, 0, [0, 0], 2, s, 50_000)
    assert not any(rep.evidence.values())
    kept = moebius_ladder_evidence(1, 0, [0, 0], 2, s, 50_000, targets=[(1, 0)])
    assert kept.evidence[(1, 0)]


def test_ladder_mixed_source():
    s = HaarSampler(42, 2)
    rep = moebius_ladder_evidence(1, 1, [0.3, 0.4j], 2, s, 50_000)
    assert rep.ok and rep.antiholomorphic_zero is None


def test_ladder_needs_p():
    with pytest.raises(ValueError):
        moebius_ladder_evidence(0, 1, [0.1, 0], 2, HaarSampler(1, 2), 100)
