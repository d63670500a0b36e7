"""Invariant suites behind ``hpqkit verify``.

Each suite runs a list of named checks.  A check that fails records a
counterexample string that can be pasted back into the CLI or a Python
session to reproduce it; the suite keeps going so the report is complete.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable

import numpy as np

from hpqkit import kernels
from hpqkit.exact import (
    BiPoly,
    GaussRational,
    RatMatrix,
    laplacian,
    mat_kernel,
    parse_poly,
    render_poly,
    scale_radial,
    substitute_linear,
)
from hpqkit.exact.poly import monomials_of_bidegree
from hpqkit.harmonics import (
    Bidegree,
    SpherePoint,
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
from hpqkit.patterns import (
    SIX_SPACES,
    PatternBox,
    PatternFamily,
    box_points,
    classify_pattern,
    closure_box,
    combine_points,
    conjugate_pattern,
    is_pattern_box,
    m_ladder_closure,
    n2_deleted_points,
)
from hpqkit.products import is_algebra_exact, product_sweep, uinv_span_pattern

SUITES = ("exact-core", "harmonics", "patterns", "product-span", "mc")


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""
    counterexample: str | None = None


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.ok), None)


@dataclass
class VerifyOptions:
    n: int | None = None
    maxdeg: int | None = None
    seed: int = 42
    samples: int = 100_000
    rule: str = "minus"
    threads: int = 1


class _Recorder:
    def __init__(self, suite: str):
        self.result = SuiteResult(suite)

    def run(self, name: str, fn: Callable[[], tuple[bool, str, str | None] | str | None]):
        """``fn`` returns None/"" on success, or a counterexample string, or a
        full ``(ok, detail, counterexample)`` triple."""
        try:
            out = fn()
        except Exception as exc:  # a crash inside a check is a failure with a traceback-free message
            self.result.checks.append(Check(name, False, f"{type(exc).__name__}: {exc}", f"{name}: raised {exc!r}"))
            return
        if isinstance(out, tuple):
            self.result.checks.append(Check(name, *out))
        elif out:
            self.result.checks.append(Check(name, False, "", out))
        else:
            self.result.checks.append(Check(name, True))


# ---------------------------------------------------------------------------
# shared fixtures


def exact_unitaries(n: int) -> dict[str, RatMatrix]:
    """The coordinate swap, diag(i, 1, ..) and the 3-4-5 rotation, padded with I."""
    if n < 2:
        return {"phase": RatMatrix([[GaussRational(0, 1)]])}

    def pad(block):
        rows = [[GaussRational(0)] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = GaussRational(1)
        for i in range(2):
            for j in range(2):
                rows[i][j] = GaussRational.coerce(block[i][j])
        return RatMatrix(rows)

    return {
        "swap": pad([[0, 1], [1, 0]]),
        "phase": pad([[GaussRational(0, 1), 0], [0, 1]]),
        "rot345": pad([[Fraction(3, 5), Fraction(4, 5)], [Fraction(-4, 5), Fraction(3, 5)]]),
    }


def sphere_points(n: int) -> dict[str, SpherePoint]:
    pad = [0] * (n - 1)
    pts = {"e1": SpherePoint([1] + pad)}
    if n >= 2:
        pts["(3/5,4/5)"] = SpherePoint([Fraction(3, 5), Fraction(4, 5)] + pad[1:])
        pts["((1+2i)/3,2/3)"] = SpherePoint([GaussRational(Fraction(1, 3), Fraction(2, 3)), Fraction(2, 3)] + pad[1:])
    else:
        pts["(3/5+4/5i)"] = SpherePoint([GaussRational(Fraction(3, 5), Fraction(4, 5))])
    return pts


def random_gauss(rng: random.Random, bound: int = 5) -> GaussRational:
    def r():
        return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))

    return GaussRational(r(), r() if rng.random() < 0.5 else 0)


def random_poly(rng: random.Random, n: int, maxdeg: int = 3, terms: int = 4) -> BiPoly:
    out = {}
    for _ in range(terms):
        d = rng.randint(0, maxdeg)
        p = rng.randint(0, d)
        keys = monomials_of_bidegree(n, p, d - p)
        out[rng.choice(keys)] = random_gauss(rng)
    return BiPoly(n, out)


def dim_formula(n: int, p: int, q: int) -> int:
    from math import comb

    if n == 1:
        return 1 if p == 0 or q == 0 else 0
    first = comb(p + n - 1, n - 1) * comb(q + n - 1, n - 1)
    second = comb(p + n - 2, n - 1) * comb(q + n - 2, n - 1) if p and q else 0
    return first - second


def _poly_repr(f: BiPoly) -> str:
    return f'parse_poly("{render_poly(f)}", {f.n})'


# ---------------------------------------------------------------------------
# exact-core


def suite_exact_core(opts: VerifyOptions) -> SuiteResult:
    rec = _Recorder("exact-core")
    rng = random.Random(opts.seed)

    def field_axioms():
        for _ in range(300):
            a, b, c = (random_gauss(rng) for _ in range(3))
            if (a + b) + c != a + (b + c) or (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c:
                return f"a={a}, b={b}, c={c}"
            if a and a * a.inverse() != 1:
                return f"inverse of {a}"
            if a.conj().conj() != a or (a * a.conj()).im != 0:
                return f"conjugation at {a}"
        return None

    def conj_hom():
        for _ in range(40):
            n = rng.randint(1, 3)
            f, g = random_poly(rng, n), random_poly(rng, n)
            if (f * g).conj() != f.conj() * g.conj() or f.conj().conj() != f:
                return f"f={_poly_repr(f)}, g={_poly_repr(g)}"
        return None

    def lap():
        for n in (1, 2, 3):
            for j in range(1, n + 1):
                if laplacian(BiPoly.z(n, j) * BiPoly.w(n, j)) != BiPoly.const(n, 4):
                    return f"Laplacian(z{j}*w{j}) at n={n}"
        for _ in range(30):
            n = rng.randint(1, 3)
            f, g = random_poly(rng, n), random_poly(rng, n)
            c = random_gauss(rng)
            if laplacian(f.scale(c) + g) != laplacian(f).scale(c) + laplacian(g):
                return f"linearity at f={_poly_repr(f)}, g={_poly_repr(g)}"
        return None

    def unitary_hom():
        for n in (2, 3):
            for name, U in exact_unitaries(n).items():
                for _ in range(8):
                    f, g = random_poly(rng, n), random_poly(rng, n)
                    fu, gu = substitute_linear(f, U), substitute_linear(g, U)
                    if substitute_linear(f * g, U) != fu * gu or substitute_linear(f + g, U) != fu + gu:
                        return f"U={name}, f={_poly_repr(f)}, g={_poly_repr(g)}"
                    if substitute_linear(fu, U.H) != f:
                        return f"round trip U={name}, f={_poly_repr(f)}"
        return None

    def kernel_rank():
        for _ in range(60):
            r, c = rng.randint(1, 5), rng.randint(1, 6)
            rows = [[random_gauss(rng, 3) if rng.random() < 0.6 else GaussRational(0) for _ in range(c)] for _ in range(r)]
            M = RatMatrix(rows, cols=c)
            K = mat_kernel(M)
            for v in K:
                if any(M.apply(v)):
                    return f"kernel vector not annihilated: M={M.tolist()}"
            if len(K) + M.rank() != c:
                return f"rank-nullity: M={M.tolist()}"
            perm = list(range(c))
            rng.shuffle(perm)
            Mp = RatMatrix([[row[j] for j in perm] for row in rows], cols=c)
            if Mp.rank() != M.rank() or len(mat_kernel(Mp)) != len(K):
                return f"second elimination order disagrees: M={M.tolist()}, perm={perm}"
        return None

    def roundtrip():
        for _ in range(60):
            n = rng.randint(1, 3)
            f = random_poly(rng, n)
            if parse_poly(render_poly(f), n) != f:
                return f"render/parse: {render_poly(f)!r}"
        return None

    def radial():
        f = parse_poly("z1*w2 + 1", 2)
        if scale_radial(f, Fraction(1, 3)) != parse_poly("1/9*z1*w2 + 1", 2):
            return "scale_radial(z1*w2 + 1, 1/3)"
        return None

    def backends():
        from hpqkit import _pykernels

        for _ in range(40):
            n = rng.randint(1, 4)
            f, g = random_poly(rng, n, 4, 6), random_poly(rng, n, 4, 6)
            _, fr, _ = (f * 60).int_parts()
            _, gr_, _ = (g * 60).int_parts()
            if kernels.mul(fr, gr_) != _pykernels.mul(fr, gr_):
                return f"mul disagrees between backends at n={n}"
            if kernels.laplacian(fr, n) != _pykernels.laplacian(fr, n):
                return f"laplacian disagrees between backends at n={n}"
            if kernels.mul_r2(fr, n) != _pykernels.mul_r2(fr, n):
                return f"mul_r2 disagrees between backends at n={n}"
            if kernels.sphere_pair(fr, gr_, n) != _pykernels.sphere_pair(fr, gr_, n):
                return f"sphere_pair disagrees between backends at n={n}"
            for (a, b), part in (f * g).homogeneous_parts().items():
                _, pr, _ = (part * 3600).int_parts()
                if pr and kernels.components(pr, n, a, b) != _pykernels.components(pr, n, a, b):
                    return f"components disagree between backends at n={n}, bidegree ({a},{b})"
        return None

    rec.run("GaussRational field axioms", field_axioms)
    rec.run("conj is an involutive ring homomorphism", conj_hom)
    rec.run("Laplacian normalization and linearity", lap)
    rec.run("substitute_linear is a ring homomorphism with inverse U*", unitary_hom)
    rec.run("mat_kernel rank-nullity under two elimination orders", kernel_rank)
    rec.run("render/parse round trip", roundtrip)
    rec.run("scale_radial per-term scaling", radial)
    rec.run(f"compiled and Python kernels agree (backend={kernels.BACKEND})", backends)
    return rec.result


# ---------------------------------------------------------------------------
# harmonics


def suite_harmonics(opts: VerifyOptions) -> SuiteResult:
    rec = _Recorder("harmonics")
    rng = random.Random(opts.seed)
    ns = [opts.n] if opts.n else [1, 2, 3]
    D = opts.maxdeg if opts.maxdeg is not None else 4

    def integral_constraint():
        for n in ns:
            for d in range(4):
                for key in monomials_of_bidegree(n, d, 0):
                    a = key[:n]
                    tot = sum(
                        integrate_monomial(n, a[:j] + (a[j] + 1,) + a[j + 1:], a[:j] + (a[j] + 1,) + a[j + 1:])
                        for j in range(n)
                    )
                    if tot != integrate_monomial(n, a, a):
                        return f"integrate_monomial({n}, {a}, {a}) vs sum over e_j"
        return None

    def dims():
        for n in ns:
            for bd in box_points(D):
                sp = harmonic_basis(n, bd)
                if sp.dim != dim_formula(n, *bd):
                    return f"dim --n {n} --p {bd.p} --q {bd.q}: got {sp.dim}, expected {dim_formula(n, *bd)}"
                for b in sp.basis:
                    if not sp.contains(b):
                        return f"basis element {_poly_repr(b)} of H{bd} is not harmonic"
        return None

    def reproducing():
        for n in ns:
            for label, z in sphere_points(n).items():
                for bd in box_points(D):
                    sp = harmonic_basis(n, bd)
                    if sp.dim == 0:
                        continue
                    K = zonal_kernel(sp, z)
                    kz, nn = K.value_at_point, K.norm2
                    if kz != nn or not kz.is_real or kz.re <= 0:
                        return f"zonal --n {n} --p {bd.p} --q {bd.q} --point {label}: K(z)={kz}, <K,K>={nn}"
                    picks = rng.sample(range(sp.dim), min(5, sp.dim))
                    for i in picks:
                        f = sp.basis[i]
                        if inner_product(n, f, K.kernel) != f(z.coords):
                            return f"<f,K_z> != f(z) for f={_poly_repr(f)}, z={label}, H{bd}"
        return None

    def projection_calculus():
        B = box_points(4)
        for n in [m for m in ns if m >= 2]:
            for d in range(5):
                for p in range(d + 1):
                    for key in monomials_of_bidegree(n, p, d - p):
                        f = BiPoly(n, {key: 1})
                        comps = {bd: project_bidegree(n, f, bd) for bd in B}
                        nz = {bd: c for bd, c in comps.items() if not c.is_zero}
                        if nz != harmonic_components(n, f):
                            return f"Gram and Fischer routes differ on {_poly_repr(f)}"
                        for bd, c in nz.items():
                            if project_bidegree(n, c, bd) != c:
                                return f"pi{bd} not idempotent on {_poly_repr(f)}"
                            for o in B:
                                if o != bd and not project_bidegree(n, c, o).is_zero:
                                    return f"pi{o} pi{bd} != 0 on {_poly_repr(f)}"
                        if not sphere_restriction_equal(n, f, sum(nz.values(), BiPoly(n))):
                            return f"components do not sum to {_poly_repr(f)}"
                        lhs = inner_product(n, f, f)
                        rhs = sum((inner_product(n, c, c) for c in nz.values()), GaussRational(0))
                        if lhs != rhs:
                            return f"Parseval fails on {_poly_repr(f)}"
        return None

    def parseval_random():
        for _ in range(30):
            n = rng.choice(ns)
            f = random_poly(rng, n, 4, 5)
            comps = harmonic_components(n, f)
            if inner_product(n, f, f) != sum((inner_product(n, c, c) for c in comps.values()), GaussRational(0)):
                return f"Parseval fails on {_poly_repr(f)}"
        return None

    def unitary_invariance():
        for n in ns:
            for name, U in exact_unitaries(n).items():
                for bd in box_points(min(D, 3)):
                    sp = harmonic_basis(n, bd)
                    for f in sp.basis:
                        fu = substitute_linear(f, U)
                        if not sp.contains(fu):
                            return f"{_poly_repr(f)} o {name} left H{bd}"
                        if bidegree_support(n, fu) != bidegree_support(n, f):
                            return f"support changed: {_poly_repr(f)} o {name}"
                        if inner_product(n, fu, fu) != inner_product(n, f, f):
                            return f"not an isometry: {_poly_repr(f)} o {name}"
        return None

    def switcheroo():
        for k in range(20):
            n = ns[k % len(ns)]
            Us = list(exact_unitaries(n).items())
            name, U = Us[k % len(Us)]
            f, g = random_poly(rng, n), random_poly(rng, n)
            lhs = integrate(n, substitute_linear(f, U) * g)
            rhs = integrate(n, f * substitute_linear(g, U.H))
            if lhs != rhs:
                return f"U={name}, f={_poly_repr(f)}, g={_poly_repr(g)}"
        return None

    def dilation():
        for _ in range(20):
            n = rng.choice(ns)
            f = BiPoly(n, {k: c for k, c in random_poly(rng, n, 4, 5).terms.items() if not any(k[n:])})
            r = rng.choice([Fraction(1, 2), Fraction(2, 3), Fraction(3)])
            if any(bd.q > 0 for bd in bidegree_support(n, scale_radial(f, r))):
                return f"holomorphic {_poly_repr(f)} dilated by {r}"
        return None

    rec.run("monomial integrals sum over e_j", integral_constraint)
    rec.run(f"dim H(p,q) closed form, p+q<={D}", dims)
    rec.run("reproducing kernel identities", reproducing)
    rec.run("projection calculus and Parseval on monomials of degree <= 4", projection_calculus)
    rec.run("Parseval on random polynomials", parseval_random)
    rec.run("unitary invariance and isometry, p+q<=3", unitary_invariance)
    rec.run("switcheroo on 20 random pairs", switcheroo)
    rec.run("holomorphic dilations stay holomorphic", dilation)
    return rec.result


# ---------------------------------------------------------------------------
# patterns


def _alt_closure(seed: PatternBox, rng: random.Random) -> PatternBox:
    """Naive closure that processes pairs in random order until stable."""
    members = set(seed.members)
    while True:
        pts = list(members)
        pairs = [(x, y) for x in pts for y in pts]
        rng.shuffle(pairs)
        added = False
        for x, y in pairs:
            for z in combine_points(x, y):
                if z.total <= seed.maxdeg and z not in members:
                    members.add(z)
                    added = True
        if not added:
            return PatternBox(seed.maxdeg, members)


ALGEBRA_FAMILIES = [
    PatternFamily("empty"), PatternFamily("origin"), PatternFamily("hol"), PatternFamily("antihol"),
    PatternFamily("full"), PatternFamily("G", (1,)), PatternFamily("G", (2,)), PatternFamily("G", (3,)),
    PatternFamily("GSigma", ()), PatternFamily("GSigma", (1,)), PatternFamily("GSigma", (2,)),
    PatternFamily("GSigma", (2, 3)), PatternFamily("GSigma", (3, 5)),
    PatternFamily("Gpq", (1, 0)), PatternFamily("Gpq", (2, 1)), PatternFamily("Gpq", (3, 1)),
    PatternFamily("Gpq", (3, 2)), PatternFamily("Gpq", (2, 1), True),
]
N2_FAMILIES = [
    PatternFamily("GSigmaStar", ()), PatternFamily("GSigmaStar", (2,)), PatternFamily("GSigmaStar", (1,)),
    PatternFamily("GpqN2", (2, 1)), PatternFamily("GpqN2", (3, 1)), PatternFamily("GpqN2", (1, 0)),
    PatternFamily("GpqN2", (2, 1), True),
]


def suite_patterns(opts: VerifyOptions) -> SuiteResult:
    rec = _Recorder("patterns")
    rng = random.Random(opts.seed)
    D = opts.maxdeg if opts.maxdeg is not None else 8

    def examples():
        diag = PatternBox(D, [(k, k) for k in range(D // 2 + 1)])
        if closure_box(PatternBox(D, [(1, 1)])) != diag:
            return f'pattern-closure --seed "(1,1)" --maxdeg {D}'
        if closure_box(PatternBox(D, [(1, 0)])) != PatternBox(D, [(k, 0) for k in range(1, D + 1)]):
            return f'pattern-closure --seed "(1,0)" --maxdeg {D}'
        if closure_box(PatternBox(D, [(2, 1)])) != PatternFamily("Gpq", (2, 1)).box(D):
            return f'pattern-closure --seed "(2,1)" --maxdeg {D}'
        if closure_box(PatternBox(D, [])) != PatternBox(D, []):
            return "closure of the empty seed"
        return None

    def closure_laws():
        pts = box_points(min(D, 6))
        Dm = min(D, 6)
        for _ in range(40):
            seed = PatternBox(Dm, rng.sample(pts, rng.randint(0, 3)))
            big = PatternBox(Dm, set(seed.members) | set(rng.sample(pts, 2)))
            c = closure_box(seed)
            if closure_box(c) != c:
                return f'idempotence: pattern-closure --seed "{seed}" --maxdeg {Dm}'
            if not c.members <= closure_box(big).members:
                return f'monotonicity: seeds "{seed}" and "{big}"'
            if _alt_closure(seed, rng) != c:
                return f'order dependence: pattern-closure --seed "{seed}" --maxdeg {Dm}'
            if not is_pattern_box(conjugate_pattern(c)):
                return f'conjugate of closure of "{seed}" is not a pattern'
        return None

    def gpq_membership():
        for pq in ((1, 0), (2, 1), (3, 1)):
            if closure_box(PatternBox(10, [pq])) != PatternFamily("Gpq", pq).box(10):
                return f'pattern-closure --seed "({pq[0]},{pq[1]})" --maxdeg 10 vs Gpq{pq}'
        return None

    def families_are_patterns():
        for fam in ALGEBRA_FAMILIES:
            for d in range(11):
                if not is_pattern_box(fam.box(d)):
                    return f"{fam} box D={d} is not closed under combine_points"
        if is_pattern_box(PatternFamily("plurih").box(2)):
            return "plurih box D=2 should not be an algebra pattern"
        return None

    def n2_families():
        for fam in N2_FAMILIES:
            res = is_algebra_exact(2, fam.box(10))
            if not res:
                return f'algebra-check --n 2 --family "{fam}" --maxdeg 10: pair {res.pair} escapes at {res.escaping}'
        return None

    def six_fixpoints():
        pts = box_points(3)
        six = {PatternFamily(k).box(3).members: k for k in SIX_SPACES}
        seen = set()
        for mask in range(1 << len(pts)):
            seed = PatternBox(3, [pts[i] for i in range(len(pts)) if mask >> i & 1])
            c = m_ladder_closure(seed)
            if c.members not in six:
                return f'pattern-mclosure --pattern "{seed}" --maxdeg 3 gives {c}'
            seen.add(c.members)
        if len(seen) != 6:
            return f"only {len(seen)} distinct fixpoints reached"
        return None

    def classify():
        cases = [
            ([(1, 0), (0, 1)], 6, PatternFamily("G", (1,))),
            ([(1, 1)], 6, PatternFamily("GSigma", ())),
            ([(2, 1)], 8, PatternFamily("Gpq", (2, 1))),
        ]
        for seed, d, want in cases:
            got = classify_pattern(closure_box(PatternBox(d, seed))).family
            if got != want:
                s = ";".join(f"({p},{q})" for p, q in seed)
                return f'pattern-classify --pattern "{s}" --maxdeg {d}: got {got}, expected {want}'
        return None

    rec.run("closure examples", examples)
    rec.run("closure idempotent, monotone, order independent", closure_laws)
    rec.run("Gpq(p,q) equals the closure of (p,q), D=10", gpq_membership)
    rec.run("family boxes are algebra patterns, D<=10", families_are_patterns)
    rec.run("n=2 families pass the exact n=2 algebra check, D=10", n2_families)
    rec.run("Moebius ladder has exactly six fixpoints, D=3", six_fixpoints)
    rec.run("classification examples", classify)
    return rec.result


# ---------------------------------------------------------------------------
# product-span


def expected_support(n: int, left: Bidegree, right: Bidegree, rule: str = "minus") -> set[Bidegree]:
    """The combination-rule prediction adjusted for low dimensions.

    n = 2 drops :func:`n2_deleted_points`; n = 1 drops every point whose H is
    zero (and everything when a factor space is zero).
    """
    pred = combine_points(left, right, rule)
    if n == 1:
        if dim_formula(1, *left) == 0 or dim_formula(1, *right) == 0:
            return set()
        return {b for b in pred if dim_formula(1, *b)}
    if n == 2 and rule == "minus":
        return pred - n2_deleted_points(left, right)
    return pred


def suite_product_span(opts: VerifyOptions) -> SuiteResult:
    rec = _Recorder("product-span")
    n = opts.n or 3
    D = opts.maxdeg if opts.maxdeg is not None else 3
    reports = product_sweep(n, D, rule=opts.rule, threads=opts.threads)
    by_pair = {(r.left, r.right): r for r in reports}

    def against_rule():
        bad = []
        for r in reports:
            if r.support != expected_support(n, r.left, r.right, opts.rule):
                bad.append(r)
        if not bad:
            what = "combine_points"
            if opts.rule == "minus" and n == 2:
                what += " minus the n=2 deletions"
            elif opts.rule == "minus" and n == 1:
                what += " on the nonzero spaces"
            return True, f"{len(reports)} pairs match {what} ({opts.rule} rule)", None
        r = bad[0]
        missing = sorted(expected_support(n, r.left, r.right, opts.rule) - r.support)
        extra = sorted(r.support - expected_support(n, r.left, r.right, opts.rule))
        detail = f"{len(bad)} of {len(reports)} pairs disagree with the {opts.rule} rule"
        ce = (f"product --n {n} --left {r.left.p},{r.left.q} --right {r.right.p},{r.right.q} --rule {opts.rule}"
              f"  # missing {[tuple(b) for b in missing]}, extra {[tuple(b) for b in extra]}")
        return False, detail, ce

    def structure():
        for r in reports:
            other = by_pair[(r.right, r.left)]
            if other.support != r.support:
                return f"asymmetric: product --n {n} --left {r.left.p},{r.left.q} --right {r.right.p},{r.right.q}"
            a, b = r.left.p + r.right.p, r.left.q + r.right.q
            for s in r.support:
                if s.p - s.q != a - b or s.total > a + b:
                    return f"support point {s} of H{r.left}*H{r.right} breaks degree bookkeeping"
            for s, w in r.witness_components.items():
                if w.is_zero or bidegree_support(n, w) != {s}:
                    return f"witness for {s} in H{r.left}*H{r.right} is not a nonzero element of H{s}"
        return None

    def completeness():
        Dm = min(D, 3)
        mons = [BiPoly(n, {k: 1}) for d in range(Dm + 1) for p in range(d + 1) for k in monomials_of_bidegree(n, p, d - p)]
        got = uinv_span_pattern(n, mons, Dm)
        want = PatternBox(Dm, [b for b in box_points(Dm) if dim_formula(n, *b)])
        if got != want:
            return f"span of monomials of degree <= {Dm} has pattern {got}"
        return None

    rec.run(f"product supports vs rule, n={n}, p+q,r+s<={D}", against_rule)
    rec.run("support symmetry, degree bookkeeping, witnesses", structure)
    rec.run("monomials span every H(p,q)", completeness)
    return rec.result


# ---------------------------------------------------------------------------
# mc


def suite_mc(opts: VerifyOptions) -> SuiteResult:
    from hpqkit import mc

    rec = _Recorder("mc")
    seed, N = opts.seed, opts.samples
    rs = np.random.default_rng(np.random.SeedSequence([seed, 99]))

    def automorphisms():
        for k in range(100):
            n = int(rs.integers(1, 4))
            a = rs.standard_normal(n) + 1j * rs.standard_normal(n)
            a *= rs.uniform(0, 0.95) / np.linalg.norm(a)
            z = rs.standard_normal(n) + 1j * rs.standard_normal(n)
            z /= np.linalg.norm(z)
            phi = mc.BallAutomorphism(a)
            ce = f"BallAutomorphism({a.tolist()}) at z={z.tolist()}"
            if np.abs(phi(np.zeros(n)) - a).max() > 1e-12 or np.abs(phi(a)).max() > 1e-12:
                return ce + ": phi(0) != a or phi(a) != 0"
            if np.abs(phi(phi(z)) - z).max() > 1e-12:
                return ce + ": not an involution"
            if abs(np.linalg.norm(phi(z)) - 1) > 1e-12:
                return ce + ": sphere not preserved"
        return None

    def unitarity():
        U = mc.HaarSampler(seed, 3, opts.threads).unitaries(min(N, 20_000))
        err = np.abs(U @ U.conj().transpose(0, 2, 1) - np.eye(3)).max()
        return (err <= 1e-12, f"max |UU*-I| = {err:.2e}", None if err <= 1e-12 else f"HaarSampler({seed}, 3)")

    def monomials():
        worst = 0.0
        for n in (1, 2, 3):
            Z = mc.HaarSampler(seed, n, opts.threads).sphere(N)
            keys = [k for d in range(4) for k in monomials_of_bidegree(n, d, 0)]
            for ka, kb in iproduct(keys, keys):
                a, b = ka[:n], kb[:n]
                f = BiPoly.monomial(n, a, b)
                est = mc.QuadEstimate.from_values(mc.poly_evaluator(f)(Z))
                exact = float(integrate_monomial(n, a, b))
                if not est.agrees(exact):
                    return f"mc_integrate(z^{a} w^{b}, n={n}, seed={seed}, N={N}) = {est.value} +- {est.stderr}, exact {exact}"
                if est.stderr:
                    worst = max(worst, abs(est.value - exact) / est.stderr)
        return True, f"largest deviation {worst:.2f} stderr", None

    def haar():
        f = parse_poly("z1^2*w1^2", 2)
        chk = mc.haar_average_check(f, [0.6, 0.8], mc.HaarSampler(seed, 2, opts.threads), N)
        return (chk.agrees, f"{chk.mc.value.real:.5f} +- {chk.mc.stderr:.5f} vs 1/3",
                None if chk.agrees else f'mc --check haar --n 2 --poly "z1^2*w1^2" --point 0.6,0.8 --seed {seed} --samples {N}')

    def phase_invariance():
        f = parse_poly("z1^2*w1 * w2 + z1*w1 + z2^2*w2^2", 2)
        s = mc.HaarSampler(seed, 2, opts.threads)
        U = s.unitaries(N)
        z = np.array([0.6, 0.8j])
        phases = np.exp(1j * np.array([0.7, -1.9]))
        ev = mc.poly_evaluator(f)
        a = mc.QuadEstimate.from_values(ev(U @ z))
        b = mc.QuadEstimate.from_values(ev((U * phases[None, None, :]) @ z))
        tol = 4 * np.hypot(a.stderr, b.stderr)
        ok = abs(a.value - b.value) <= tol
        return ok, f"|diff| = {abs(a.value - b.value):.2e}, tol {tol:.2e}", None if ok else f"column phases, seed={seed}"

    def moebius_nonzero():
        s = mc.HaarSampler(seed, 2, opts.threads)
        g = mc.compose(parse_poly("z1", 2), mc.BallAutomorphism([0.5, 0]))
        est = mc.mc_project(g, (2, 0), 2, s, N)
        ok = est.nonzero() and est.agrees(-0.375)
        return (ok, f"{est.value.real:.5f} +- {est.stderr:.5f} (series value -3/8)",
                None if ok else f"mc --check project --n 2 --poly z1 --a 0.5,0 --p 2 --q 0 --seed {seed} --samples {N}")

    def holomorphic_vanish():
        for pq, a in (((1, 0), "0.5,0"), ((2, 0), "0.3,0.4j"), ((1, 0), "0,0.6")):
            rep = mc.moebius_ladder_evidence(*pq, [complex(x) for x in a.split(",")], 2, mc.HaarSampler(seed, 2, opts.threads), N)
            if not rep.ok:
                return f"mc --check ladder --n 2 --p {pq[0]} --q {pq[1]} --a {a} --seed {seed} --samples {N}"
        return None

    def reproducible():
        f = parse_poly("z1*w1*z2*w2", 2)
        e1 = mc.mc_integrate(f, mc.HaarSampler(seed, 2, 1), N)
        e2 = mc.mc_integrate(f, mc.HaarSampler(seed, 2, 4), N)
        return None if e1 == e2 else f"thread count changed the estimate: {e1} vs {e2}"

    rec.run("ball automorphism invariants on 100 random pairs", automorphisms)
    rec.run("Haar samples are unitary", unitarity)
    rec.run("mc_integrate on monomials |alpha|,|beta|<=3, n<=3", monomials)
    rec.run("Haar average of |z1|^4 equals 1/3", haar)
    rec.run("column-phase invariance of Haar averages", phase_invariance)
    rec.run("pi_20(z1 o phi_(1/2,0))(e1) is nonzero", moebius_nonzero)
    rec.run("ladder evidence and holomorphic vanishing", holomorphic_vanish)
    rec.run("bit-identical across thread counts", reproducible)
    return rec.result


RUNNERS = {
    "exact-core": suite_exact_core,
    "harmonics": suite_harmonics,
    "patterns": suite_patterns,
    "product-span": suite_product_span,
    "mc": suite_mc,
}


def run_suite(name: str, opts: VerifyOptions | None = None) -> list[SuiteResult]:
    opts = opts or VerifyOptions()
    if name == "all":
        return [RUNNERS[s](opts) for s in SUITES]
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return [RUNNERS[name](opts)]
