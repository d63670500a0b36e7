"""Exact harmonic analysis of polynomials on the unit sphere S of C^n.

The measure on S is the normalized rotation-invariant measure; all integrals
reduce to the monomial formula in :func:`integrate_monomial`.

Two routes compute the bidegree components of a polynomial:

* :func:`project_bidegree` solves the Gram system of an explicit basis of
  H(p, q) (reference route).
* :func:`harmonic_components` uses the Fischer decomposition
  ``f = sum_j |z|^(2j) h_j`` of each bidegree-homogeneous part, with ``h_j``
  recovered from iterated Laplacians.  It never forms a Gram matrix and is the
  route used for supports and products.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, NamedTuple, Sequence

from hpqkit import kernels
from hpqkit.exact.gaussrat import ZERO, GaussRational
from hpqkit.exact.linalg import RatMatrix, integer_kernel
from hpqkit.exact.poly import BiPoly, DimensionMismatch, monomials_of_bidegree, primitive_integer_vector


class Bidegree(NamedTuple):
    p: int
    q: int

    @classmethod
    def of(cls, x) -> Bidegree:
        if isinstance(x, Bidegree):
            return x
        p, q = x
        if p < 0 or q < 0:
            raise ValueError(f"bidegree must be nonnegative, got {(p, q)}")
        return cls(int(p), int(q))

    @property
    def total(self) -> int:
        return self.p + self.q

    def __str__(self):
        return f"({self.p},{self.q})"


@dataclass(frozen=True)
class SphereContext:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")


class NotOnSphere(ValueError):
    pass


@dataclass(frozen=True)
class SpherePoint:
    coords: tuple[GaussRational, ...]

    def __init__(self, coords: Iterable):
        cs = tuple(GaussRational.coerce(c) for c in coords)
        if sum((c.abs2() for c in cs), Fraction(0)) != 1:
            raise NotOnSphere(f"point {[str(c) for c in cs]} is not on the unit sphere")
        object.__setattr__(self, "coords", cs)

    @property
    def n(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def _ctx(ctx) -> SphereContext:
    return ctx if isinstance(ctx, SphereContext) else SphereContext(int(ctx))


# ---------------------------------------------------------------------------
# integration


@lru_cache(maxsize=None)
def _diag_integral(n: int, alpha: tuple[int, ...]) -> Fraction:
    num = factorial(n - 1)
    for a in alpha:
        num *= factorial(a)
    return Fraction(num, factorial(n - 1 + sum(alpha)))


def integrate_monomial(ctx, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
    """``int_S z^alpha conj(z)^beta dsigma``: zero unless ``alpha == beta``,
    else ``(n-1)! alpha! / (n-1+|alpha|)!``."""
    n = _ctx(ctx).n
    alpha, beta = tuple(alpha), tuple(beta)
    if len(alpha) != n or len(beta) != n:
        raise DimensionMismatch("multi-index length must equal n")
    if alpha != beta:
        return Fraction(0)
    return _diag_integral(n, alpha)


def integrate(ctx, f: BiPoly) -> GaussRational:
    """``int_S f dsigma``."""
    n = _ctx(ctx).n
    if f.n != n:
        raise DimensionMismatch("polynomial dimension does not match context")
    total = ZERO
    for key, c in f.terms.items():
        a, b = key[:n], key[n:]
        if a == b:
            total = total + c * _diag_integral(n, a)
    return total


def _grouped(f: BiPoly) -> dict:
    n = f.n
    groups: dict = {}
    for key, c in f.terms.items():
        a, b = key[:n], key[n:]
        delta = tuple(x - y for x, y in zip(a, b))
        groups.setdefault(delta, []).append((a, b, c))
    return groups


def inner_product(ctx, f: BiPoly, g: BiPoly) -> GaussRational:
    """``<f, g> = int_S f conj(g) dsigma`` expanded over monomial integrals.

    A term pair contributes only when ``alpha - beta`` agrees, so terms are
    bucketed by that difference first.
    """
    n = _ctx(ctx).n
    if f.n != n or g.n != n:
        raise DimensionMismatch("polynomial dimension does not match context")
    gf = _grouped(f)
    gg = _grouped(g)
    real = f.is_real and g.is_real
    total_re = Fraction(0)
    total = ZERO
    for delta, fterms in gf.items():
        gterms = gg.get(delta)
        if not gterms:
            continue
        for a, b, c in fterms:
            for a2, b2, c2 in gterms:
                # z^(a+b2) conj(z)^(b+a2); a - b == a2 - b2 makes the two equal
                gamma = tuple(x + y for x, y in zip(a, b2))
                w = _diag_integral(n, gamma)
                if real:
                    total_re += c.re * c2.re * w
                else:
                    total = total + c * c2.conj() * w
    return GaussRational(total_re) if real else total


# ---------------------------------------------------------------------------
# H(p, q)


@dataclass(frozen=True, eq=False)
class HarmonicSpace:
    """A basis of H(p, q) with its exact Gram matrix.

    Basis elements have coprime integer coefficients; the basis is orthogonal
    only by accident, never by construction.
    """

    ctx: SphereContext
    bidegree: Bidegree
    basis: tuple[BiPoly, ...]
    gram: RatMatrix
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def gram_inverse(self) -> RatMatrix:
        if "ginv" not in self._cache:
            self._cache["ginv"] = self.gram.inverse()
        return self._cache["ginv"]

    def contains(self, f: BiPoly) -> bool:
        """Exact membership: bidegree-homogeneous of the right bidegree and harmonic."""
        if f.is_zero:
            return True
        return f.bidegrees() == {tuple(self.bidegree)} and f.laplacian().is_zero

    def coordinates(self, f: BiPoly) -> list[GaussRational]:
        """Coefficients of ``f`` in :attr:`basis` (``f`` must lie in the space)."""
        if not self.contains(f):
            raise ValueError("polynomial is not in this harmonic space")
        return self._solve([inner_product(self.ctx, f, b) for b in self.basis])

    def _solve(self, rhs: Sequence) -> list[GaussRational]:
        # c with gram^T c = rhs, through the cached exact inverse
        ginv = self.gram_inverse
        d = self.dim
        return [sum((ginv[j, k] * rhs[j] for j in range(d) if rhs[j]), ZERO) for k in range(d)]

    def combine(self, coeffs: Sequence) -> BiPoly:
        out = BiPoly(self.ctx.n)
        for c, b in zip(coeffs, self.basis):
            c = GaussRational.coerce(c)
            if c:
                out = out + b.scale(c)
        return out


def laplacian_matrix(n: int, p: int, q: int) -> tuple[list[list[int]], list[tuple], list[tuple]]:
    """Integer matrix of the Laplacian from bidegree (p,q) monomials (columns)
    to bidegree (p-1,q-1) monomials (rows)."""
    cols = monomials_of_bidegree(n, p, q)
    if p == 0 or q == 0:
        return [], cols, []
    rows = monomials_of_bidegree(n, p - 1, q - 1)
    index = {k: i for i, k in enumerate(rows)}
    mat = [[0] * len(cols) for _ in rows]
    for c, key in enumerate(cols):
        for j in range(n):
            a, b = key[j], key[n + j]
            if a and b:
                k = list(key)
                k[j] -= 1
                k[n + j] -= 1
                mat[index[tuple(k)]][c] += 4 * a * b
    return mat, cols, rows


@lru_cache(maxsize=None)
def _harmonic_basis(n: int, p: int, q: int) -> HarmonicSpace:
    ctx = SphereContext(n)
    mat, cols, _ = laplacian_matrix(n, p, q)
    basis, packed = [], []
    for vec in integer_kernel(mat, len(cols)):
        ints = primitive_integer_vector(vec)
        basis.append(BiPoly(n, {cols[i]: v for i, v in enumerate(ints) if v}))
        packed.append({kernels.pack(cols[i][:n], cols[i][n:]): v for i, v in enumerate(ints) if v})
    # real integer basis, so the Gram matrix is symmetric
    scale = Fraction(factorial(n - 1), factorial(n - 1 + p + q))
    d = len(basis)
    rows = [[Fraction(0)] * d for _ in range(d)]
    for j in range(d):
        for k in range(j, d):
            rows[j][k] = rows[k][j] = kernels.sphere_pair(packed[j], packed[k], n) * scale
    return HarmonicSpace(ctx, Bidegree(p, q), tuple(basis), RatMatrix(rows, cols=d))


def harmonic_basis(ctx, bd) -> HarmonicSpace:
    """Basis of H(p, q): the exact nullspace of the Laplacian on bidegree-(p,q)
    polynomials.  Results are cached per ``(n, p, q)``."""
    bd = Bidegree.of(bd)
    return _harmonic_basis(_ctx(ctx).n, bd.p, bd.q)


@dataclass(frozen=True, eq=False)
class ZonalKernel:
    space: HarmonicSpace
    point: SpherePoint
    kernel: BiPoly

    @property
    def value_at_point(self) -> GaussRational:
        return self.kernel(self.point.coords)

    @property
    def norm2(self) -> GaussRational:
        return inner_product(self.space.ctx, self.kernel, self.kernel)


def zonal_kernel(space: HarmonicSpace, z) -> ZonalKernel:
    """The reproducing element ``K_z`` of ``space`` at the sphere point ``z``:
    ``<f, K_z> = f(z)`` for every ``f`` in the space."""
    pt = z if isinstance(z, SpherePoint) else SpherePoint(z)
    if pt.n != space.ctx.n:
        raise DimensionMismatch("point dimension does not match the space")
    if space.dim == 0:
        raise ValueError(f"H{space.bidegree} is {{0}} for n={space.ctx.n}; it has no zonal kernel")
    vals = [b(pt.coords).conj() for b in space.basis]
    ginv = space.gram_inverse
    coeffs = []
    for k in range(space.dim):
        coeffs.append(sum((vals[j] * ginv[j, k] for j in range(space.dim)), ZERO))
    return ZonalKernel(space, pt, space.combine(coeffs))


def project_bidegree(ctx, f: BiPoly, bd) -> BiPoly:
    """Orthogonal projection of ``f`` onto H(p, q) by an exact Gram solve."""
    space = harmonic_basis(ctx, bd)
    if space.dim == 0:
        return BiPoly(f.n)
    rhs = [inner_product(space.ctx, f, b) for b in space.basis]
    if not any(rhs):
        return BiPoly(f.n)
    return space.combine(space._solve(rhs))


# ---------------------------------------------------------------------------
# Fischer-decomposition route


def _int_components(g: dict, n: int, a: int, b: int, wanted: set[int] | None = None, emit: set[int] | None = None):
    """Harmonic components of the bidegree-(a, b) integer polynomial ``g``.

    Yields ``(j, poly, den)`` with ``poly / den`` the component of bidegree
    ``(a-j, b-j)``; zero components are skipped.  See
    :func:`hpqkit._pykernels.components` for the formula.
    """
    yield from kernels.components(g, n, a, b, wanted, emit)


def homogeneous_components(f: BiPoly, wanted: set[int] | None = None) -> dict[Bidegree, BiPoly]:
    """Components of a bidegree-homogeneous polynomial, keyed by target bidegree."""
    if f.is_zero:
        return {}
    bds = f.bidegrees()
    if len(bds) != 1:
        raise ValueError("polynomial is not bidegree-homogeneous")
    (a, b), = bds
    den, re, im = f.int_parts()
    acc: dict = {}
    for part, is_im in ((re, False), (im, True)):
        if not part:
            continue
        for j, poly, d in _int_components(part, f.n, a, b, wanted):
            comp = BiPoly.from_int_parts(f.n, d * den, poly)
            if is_im:
                comp = comp.scale(GaussRational(0, 1))
            key = Bidegree(a - j, b - j)
            acc[key] = acc[key] + comp if key in acc else comp
    return {k: v for k, v in acc.items() if not v.is_zero}


def harmonic_components(ctx, f: BiPoly) -> dict[Bidegree, BiPoly]:
    """All nonzero ``pi_pq f`` for a polynomial ``f`` restricted to S."""
    n = _ctx(ctx).n
    if f.n != n:
        raise DimensionMismatch("polynomial dimension does not match context")
    out: dict = {}
    for part in f.homogeneous_parts().values():
        for bd, comp in homogeneous_components(part).items():
            out[bd] = out[bd] + comp if bd in out else comp
    return {bd: c for bd, c in sorted(out.items()) if not c.is_zero}


def bidegree_support(ctx, f: BiPoly) -> set[Bidegree]:
    """``{(p, q) : pi_pq f != 0}`` for a polynomial ``f`` on S."""
    return set(harmonic_components(ctx, f))


def sphere_restriction_equal(ctx, f: BiPoly, g: BiPoly) -> bool:
    """Whether ``f`` and ``g`` agree as functions on S."""
    return not harmonic_components(ctx, f - g)
