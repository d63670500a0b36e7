"""Gaussian rationals ``a + b*i`` with ``a, b`` in ``Fraction``."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

Scalar = Union[int, Fraction, "GaussRational"]


class GaussRational:
    """Immutable exact complex number with rational parts.

    Mixed arithmetic with ``int`` and ``Fraction`` is supported; the result is
    always a :class:`GaussRational`.
    """

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)
        self._hash = None

    @classmethod
    def coerce(cls, x) -> GaussRational:
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Rational)):
            return cls(x)
        if isinstance(x, complex):
            raise TypeError("floating-point complex values are not exact")
        raise TypeError(f"cannot convert {type(x).__name__} to GaussRational")

    # ring operations -------------------------------------------------
    def __add__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        if not o.im:
            return GaussRational(self.re * o.re, self.im * o.re)
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        d = o.abs2()
        if d == 0:
            raise ZeroDivisionError("GaussRational division by zero")
        num = self * o.conj()
        return GaussRational(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussRational(1) / (self ** (-k))
        result = GaussRational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> GaussRational:
        return GaussRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """``|x|**2`` as a Fraction."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> GaussRational:
        return GaussRational(1) / self

    # comparisons -----------------------------------------------------
    def __eq__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.re) if not self.im else hash((self.re, self.im))
        return self._hash

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussRational({self.re!s}, {self.im!s})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = GaussRational(0)
ONE = GaussRational(1)
I = GaussRational(0, 1)


def gr(x) -> GaussRational:
    """Coerce ``int``/``Fraction``/``str``/``GaussRational`` to a GaussRational.

    Strings accept ``"a/b"`` or ``"a/b+c/di"`` forms.
    """
    if isinstance(x, str):
        from hpqkit.exact.parse import parse_gauss

        return parse_gauss(x)
    return GaussRational.coerce(x)
