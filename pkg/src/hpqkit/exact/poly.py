"""Sparse polynomials in ``z_1..z_n`` and their conjugates ``w_j = conj(z_j)``.

Terms are keyed by the concatenated exponent tuple ``alpha + beta`` (length
``2n``).  Coefficients are :class:`GaussRational` and never zero.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator, Mapping, Sequence

from hpqkit import kernels
from hpqkit.exact.gaussrat import ZERO, GaussRational


class DimensionMismatch(ValueError):
    pass


Key = tuple  # alpha + beta


def grlex_key(key: Key) -> tuple:
    """Graded lexicographic sort key on the concatenated exponent tuple."""
    return (sum(key), key)


class BiPoly:
    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[Key, object] | None = None):
        if n < 1:
            raise ValueError("dimension n must be >= 1")
        self.n = n
        self._hash = None
        clean: dict = {}
        if terms:
            for key, c in terms.items():
                key = tuple(key)
                if len(key) != 2 * n:
                    raise DimensionMismatch(f"exponent tuple {key} does not have length {2 * n}")
                if any(e < 0 for e in key):
                    raise ValueError(f"negative exponent in {key}")
                c = GaussRational.coerce(c)
                if c:
                    if key in clean:
                        c = clean[key] + c
                        if not c:
                            del clean[key]
                            continue
                    clean[key] = c
        self._terms = clean

    # constructors ------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> BiPoly:
        return cls(n)

    @classmethod
    def const(cls, n: int, c=1) -> BiPoly:
        return cls(n, {(0,) * (2 * n): c})

    @classmethod
    def monomial(cls, n: int, alpha: Sequence[int], beta: Sequence[int], c=1) -> BiPoly:
        alpha, beta = tuple(alpha), tuple(beta)
        if len(alpha) != n or len(beta) != n:
            raise DimensionMismatch("multi-index length must equal n")
        return cls(n, {alpha + beta: c})

    @classmethod
    def z(cls, n: int, j: int) -> BiPoly:
        """The coordinate ``z_j`` (1-based)."""
        if not 1 <= j <= n:
            raise ValueError(f"variable index {j} out of range 1..{n}")
        key = [0] * (2 * n)
        key[j - 1] = 1
        return cls(n, {tuple(key): 1})

    @classmethod
    def w(cls, n: int, j: int) -> BiPoly:
        """The conjugate coordinate ``conj(z_j)`` (1-based)."""
        if not 1 <= j <= n:
            raise ValueError(f"variable index {j} out of range 1..{n}")
        key = [0] * (2 * n)
        key[n + j - 1] = 1
        return cls(n, {tuple(key): 1})

    # access --------------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Key, GaussRational]]:
        """Terms in descending graded-lex order."""
        for key in sorted(self._terms, key=grlex_key, reverse=True):
            yield key, self._terms[key]

    def coeff(self, alpha: Sequence[int], beta: Sequence[int]) -> GaussRational:
        return self._terms.get(tuple(alpha) + tuple(beta), ZERO)

    def split_key(self, key: Key) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return key[: self.n], key[self.n :]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def term_bidegree(self, key: Key) -> tuple[int, int]:
        return sum(key[: self.n]), sum(key[self.n :])

    def bidegrees(self) -> set[tuple[int, int]]:
        return {self.term_bidegree(k) for k in self._terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    @property
    def total_degree(self) -> int:
        return max((sum(k) for k in self._terms), default=-1)

    def homogeneous_parts(self) -> dict[tuple[int, int], BiPoly]:
        parts: dict = {}
        for k, c in self._terms.items():
            parts.setdefault(self.term_bidegree(k), {})[k] = c
        return {bd: BiPoly(self.n, t) for bd, t in parts.items()}

    @property
    def is_real(self) -> bool:
        """All coefficients real (not the same as real-valued on S)."""
        return all(c.is_real for c in self._terms.values())

    # arithmetic ----------------------------------------------------------
    def _check(self, other: BiPoly):
        if not isinstance(other, BiPoly):
            raise TypeError(f"expected BiPoly, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatch(f"dimension mismatch: {self.n} vs {other.n}")

    def _lift(self, other) -> BiPoly:
        if isinstance(other, BiPoly):
            self._check(other)
            return other
        return BiPoly.const(self.n, GaussRational.coerce(other))

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, ZERO) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return BiPoly._raw(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw(self.n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> BiPoly:
        c = GaussRational.coerce(c)
        if not c:
            return BiPoly(self.n)
        return BiPoly._raw(self.n, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            return poly_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __truediv__(self, other):
        return self.scale(GaussRational(1) / GaussRational.coerce(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = BiPoly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self) -> BiPoly:
        """Complex conjugate: swaps ``alpha``/``beta`` and conjugates coefficients."""
        n = self.n
        return BiPoly._raw(n, {k[n:] + k[:n]: c.conj() for k, c in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.n == other.n and self._terms == other._terms
        try:
            return self == BiPoly.const(self.n, GaussRational.coerce(other))
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # evaluation ----------------------------------------------------------
    def __call__(self, point: Sequence) -> GaussRational:
        if len(point) != self.n:
            raise DimensionMismatch(f"point has {len(point)} coordinates, expected {self.n}")
        pts = [GaussRational.coerce(x) for x in point]
        cpts = [x.conj() for x in pts]
        total = ZERO
        for key, c in self._terms.items():
            v = c
            for j, e in enumerate(key[: self.n]):
                if e:
                    v = v * pts[j] ** e
            for j, e in enumerate(key[self.n :]):
                if e:
                    v = v * cpts[j] ** e
            total = total + v
        return total

    # kernel bridge -------------------------------------------------------
    def int_parts(self) -> tuple[int, dict, dict]:
        """Return ``(den, re, im)`` with packed-key integer dicts so that
        ``self == (re + i*im) / den``."""
        den = 1
        for c in self._terms.values():
            den = lcm(den, c.re.denominator, c.im.denominator)
        re: dict = {}
        im: dict = {}
        n = self.n
        for k, c in self._terms.items():
            pk = kernels.pack(k[:n], k[n:])
            if c.re:
                re[pk] = c.re.numerator * (den // c.re.denominator)
            if c.im:
                im[pk] = c.im.numerator * (den // c.im.denominator)
        return den, re, im

    @classmethod
    def from_int_parts(cls, n: int, den: int, re: Mapping[int, int], im: Mapping[int, int] | None = None) -> BiPoly:
        im = im or {}
        out: dict = {}
        for pk in set(re) | set(im):
            a, b = kernels.unpack(pk, n)
            c = GaussRational(Fraction(re.get(pk, 0), den), Fraction(im.get(pk, 0), den))
            if c:
                out[a + b] = c
        return cls._raw(n, out)

    @classmethod
    def _raw(cls, n: int, terms: dict) -> BiPoly:
        obj = object.__new__(cls)
        obj.n = n
        obj._terms = terms
        obj._hash = None
        return obj

    # calculus ------------------------------------------------------------
    def laplacian(self) -> BiPoly:
        return laplacian(self)

    def scale_radial(self, r) -> BiPoly:
        return scale_radial(self, r)

    def substitute_linear(self, U) -> BiPoly:
        return substitute_linear(self, U)

    def __repr__(self):
        from hpqkit.exact.parse import render_poly

        return f"BiPoly(n={self.n}, {render_poly(self)!r})"

    def __str__(self):
        from hpqkit.exact.parse import render_poly

        return render_poly(self)


# --------------------------------------------------------------------------
# operations


def _parts_mul(fp, gp):
    df, fr, fi = fp
    dg, gr_, gi = gp
    re = kernels.mul(fr, gr_) if fr and gr_ else {}
    im: dict = {}
    if fi and gi:
        re = kernels.lincomb(1, re, -1, kernels.mul(fi, gi))
    if fr and gi:
        im = kernels.mul(fr, gi)
    if fi and gr_:
        im = kernels.lincomb(1, im, 1, kernels.mul(fi, gr_))
    return df * dg, re, im


def poly_mul(f: BiPoly, g: BiPoly) -> BiPoly:
    """Exact product.  Raises :class:`DimensionMismatch` if ``f.n != g.n``."""
    f._check(g)
    if not f or not g:
        return BiPoly(f.n)
    den, re, im = _parts_mul(f.int_parts(), g.int_parts())
    return BiPoly.from_int_parts(f.n, den, re, im)


def laplacian(f: BiPoly) -> BiPoly:
    """``4 * sum_j d^2 f / dz_j dw_j``; each term ``c z^a w^b`` contributes
    ``4 c a_j b_j z^(a-e_j) w^(b-e_j)``."""
    den, re, im = f.int_parts()
    return BiPoly.from_int_parts(
        f.n, den, kernels.laplacian(re, f.n) if re else {}, kernels.laplacian(im, f.n) if im else {}
    )


def scale_radial(f: BiPoly, r) -> BiPoly:
    """The dilation ``f_r(z) = f(r z)``: a term of bidegree (p, q) gains ``r**(p+q)``."""
    r = GaussRational.coerce(r)
    if not r.is_real:
        raise ValueError("radial scale must be real")
    return BiPoly._raw(
        f.n,
        {k: c * r ** sum(k) for k, c in f._terms.items()} if r else
        {k: c for k, c in f._terms.items() if sum(k) == 0},
    )


def substitute_linear(f: BiPoly, U) -> BiPoly:
    """``f o U``: ``z -> U z`` in the holomorphic slots and ``w -> conj(U) w``.

    ``U`` must be an exact unitary (``U U* = I`` is checked).
    """
    from hpqkit.exact.linalg import RatMatrix

    U = RatMatrix.coerce(U)
    n = f.n
    if U.shape != (n, n):
        raise DimensionMismatch(f"unitary must be {n}x{n}, got {U.shape}")
    if not U.is_unitary():
        raise ValueError("matrix is not unitary (U U* != I)")
    lin_z = []
    lin_w = []
    for i in range(n):
        tz: dict = {}
        tw: dict = {}
        for k in range(n):
            u = U[i, k]
            if u:
                kz = [0] * (2 * n)
                kz[k] = 1
                tz[tuple(kz)] = u
                kw = [0] * (2 * n)
                kw[n + k] = 1
                tw[tuple(kw)] = u.conj()
        lin_z.append(BiPoly(n, tz))
        lin_w.append(BiPoly(n, tw))
    powers: dict = {}

    def power(slot: int, e: int) -> BiPoly:
        key = (slot, e)
        if key not in powers:
            base = lin_z[slot] if slot < n else lin_w[slot - n]
            powers[key] = base if e == 1 else power(slot, e - 1) * base
        return powers[key]

    out = BiPoly(n)
    for key, c in f._terms.items():
        term = BiPoly.const(n, c)
        for slot, e in enumerate(key):
            if e:
                term = term * power(slot, e)
        out = out + term
    return out


def monomials_of_bidegree(n: int, p: int, q: int) -> list[Key]:
    """All exponent keys ``alpha + beta`` with ``|alpha| = p``, ``|beta| = q``,
    in ascending graded-lex order."""
    keys = [a + b for a in compositions(p, n) for b in compositions(q, n)]
    return sorted(keys, key=grlex_key)


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` nonnegative parts."""
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def primitive_integer_vector(vec: Iterable[Fraction | int]) -> list[int]:
    """Scale a rational vector to coprime integers with positive leading entry."""
    vec = [Fraction(x) for x in vec]
    den = 1
    for x in vec:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return [x // g for x in ints]


__all__ = [
    "BiPoly",
    "DimensionMismatch",
    "compositions",
    "grlex_key",
    "laplacian",
    "monomials_of_bidegree",
    "poly_mul",
    "primitive_integer_vector",
    "scale_radial",
    "substitute_linear",
]
