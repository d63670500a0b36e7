"""Bidegree supports of product spaces H(p,q)·H(r,s), computed exactly.

The span of all products ``f g`` is unitarily invariant, so its support is the
union of the supports of the basis products ``b_i c_j``; each product is
decomposed with the Fischer route of :mod:`hpqkit.harmonics`.  Once a target
bidegree has a witness, later products skip it.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from hpqkit import kernels
from hpqkit.exact.poly import BiPoly
from hpqkit.harmonics import Bidegree, SphereContext, _ctx, _int_components, bidegree_support, harmonic_basis
from hpqkit.patterns import PatternBox, Rule, combine_points


@dataclass
class ProductSupportReport:
    ctx: SphereContext
    left: Bidegree
    right: Bidegree
    support: set[Bidegree]
    predicted: set[Bidegree]
    match: bool
    witness_components: dict[Bidegree, BiPoly] = field(default_factory=dict)
    rule: Rule = "minus"
    pairs_checked: int = 0

    @property
    def missing(self) -> list[Bidegree]:
        """Predicted but absent."""
        return sorted(self.predicted - self.support)

    @property
    def extra(self) -> list[Bidegree]:
        """Present but not predicted."""
        return sorted(self.support - self.predicted)


def _int_basis(space):
    out = []
    for b in space.basis:
        den, re, im = b.int_parts()
        assert den == 1 and not im, "harmonic bases have integer real coefficients"
        out.append(re)
    return out


def product_space_support(
    ctx,
    left,
    right,
    rule: Rule = "minus",
    max_total: int | None = None,
    exhaustive: bool = False,
) -> ProductSupportReport:
    """Support of H(left)·H(right) with the combination-rule prediction attached.

    ``max_total`` restricts attention to target bidegrees of total degree
    ``<= max_total`` (both ``support`` and ``predicted`` are cut the same way).
    By default the scan stops once every candidate component has a witness;
    ``exhaustive=True`` decomposes every product of basis elements anyway
    (useful for timing and as a cross-check).
    """
    ctx = _ctx(ctx)
    n = ctx.n
    left, right = Bidegree.of(left), Bidegree.of(right)
    a, b = left.p + right.p, left.q + right.q
    predicted = combine_points(left, right, rule)
    candidates = {j for j in range(min(a, b) + 1) if max_total is None or a + b - 2 * j <= max_total}
    if max_total is not None:
        predicted = {x for x in predicted if x.total <= max_total}
    L = harmonic_basis(ctx, left)
    R = harmonic_basis(ctx, right)
    lb, rb = _int_basis(L), _int_basis(R)
    found: dict[int, BiPoly] = {}
    checked = 0
    for i, f in enumerate(lb):
        # H(p,q)·H(p,q): products are symmetric in the two factors
        start = i if left == right else 0
        for g in rb[start:]:
            todo = candidates - set(found)
            if not todo and not exhaustive:
                break
            checked += 1
            prod = kernels.mul(f, g)
            wanted = candidates if exhaustive else todo
            for j, poly, den in _int_components(prod, n, a, b, wanted, todo):
                if poly is not None:
                    found[j] = BiPoly.from_int_parts(n, den, poly)
        if not exhaustive and not candidates - set(found):
            break
    support = {Bidegree(a - j, b - j) for j in found}
    witnesses = {Bidegree(a - j, b - j): w for j, w in sorted(found.items())}
    return ProductSupportReport(
        ctx, left, right, support, predicted, support == predicted, witnesses, rule, checked
    )


def sweep_pairs(maxdeg: int) -> list[tuple[Bidegree, Bidegree]]:
    pts = [Bidegree(p, t - p) for t in range(maxdeg + 1) for p in range(t + 1)]
    return [(x, y) for x in pts for y in pts]


def product_sweep(ctx, maxdeg: int, rule: Rule = "minus", threads: int | None = None,
                  exhaustive: bool = False) -> list[ProductSupportReport]:
    """Reports for every ordered pair of bidegrees with total degree <= maxdeg,
    in sorted pair order."""
    pairs = sweep_pairs(maxdeg)
    threads = threads or int(os.environ.get("HPQKIT_THREADS", "1"))
    one = lambda xy: product_space_support(ctx, *xy, rule=rule, exhaustive=exhaustive)  # noqa: E731
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(one, pairs))
    return [one(xy) for xy in pairs]


def uinv_span_pattern(ctx, generators, maxdeg: int | None = None) -> PatternBox:
    """Support pattern of the closed unitarily invariant span of ``generators``.

    The box size defaults to the largest total degree among the generators.
    """
    ctx = _ctx(ctx)
    supp: set[Bidegree] = set()
    for g in generators:
        supp |= bidegree_support(ctx, g)
    D = maxdeg if maxdeg is not None else max((g.total_degree for g in generators), default=0)
    D = max(D, 0)
    return PatternBox.truncate(D, supp)


@dataclass
class AlgebraCheck:
    is_algebra: bool
    maxdeg: int
    pair: tuple[Bidegree, Bidegree] | None = None
    escaping: Bidegree | None = None
    pairs_checked: int = 0
    closure: str = "uniform"

    def __bool__(self):
        return self.is_algebra


def is_algebra_exact(ctx, omega: PatternBox) -> AlgebraCheck:
    """Whether every product support (inside the box) stays in ``omega``.

    Pairs are visited in sorted order; the first escape is returned as the
    counterexample.
    """
    ctx = _ctx(ctx)
    D = omega.maxdeg
    count = 0
    for x, y in combinations_with_replacement(omega.sorted(), 2):
        rep = product_space_support(ctx, x, y, max_total=D)
        count += 1
        escapes = sorted(rep.support - omega.members)
        if escapes:
            return AlgebraCheck(False, D, (x, y), escapes[0], count)
    return AlgebraCheck(True, D, None, None, count)


def cstar_equivalence_check(ctx, omega: PatternBox) -> dict:
    """Algebra test for the uniform and the weak* closure of E_Omega.

    Both reduce to the same support containment, so the same computation
    answers both; the result records each verdict side by side.
    """
    uniform = is_algebra_exact(ctx, omega)
    weak_star = AlgebraCheck(uniform.is_algebra, uniform.maxdeg, uniform.pair, uniform.escaping,
                             uniform.pairs_checked, "weak*")
    return {
        "is_algebra": uniform.is_algebra,
        "uniform": uniform,
        "weak_star": weak_star,
        "equivalent": uniform.is_algebra == weak_star.is_algebra,
    }
