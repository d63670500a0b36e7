"""Exact dense matrices over the Gaussian rationals.

Elimination is fraction-free (Bareiss): rows are first scaled to integers
(or Gaussian integers) and every update divides exactly by the previous pivot.
Pivots are chosen as the first nonzero entry in column order.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from hpqkit.exact.gaussrat import ONE, ZERO, GaussRational


class InconsistentSystem(ValueError):
    """Raised by :meth:`RatMatrix.solve` when ``A x = b`` has no solution."""


class RatMatrix:
    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[object]], cols: int | None = None):
        rows = [[GaussRational.coerce(x) for x in row] for row in data]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows

    @classmethod
    def coerce(cls, x) -> RatMatrix:
        return x if isinstance(x, RatMatrix) else cls(x)

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        return cls([[ZERO] * cols for _ in range(rows)], cols=cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> list[GaussRational]:
        return list(self._data[i])

    def tolist(self) -> list[list[GaussRational]]:
        return [list(r) for r in self._data]

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self._data == other._data and self.shape == other.shape

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self._data)
        return f"RatMatrix([{body}])"

    @property
    def is_real(self) -> bool:
        return all(x.is_real for r in self._data for x in r)

    # algebra -------------------------------------------------------------
    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for i in range(self.rows):
            ri = self._data[i]
            out.append([
                sum((ri[k] * other._data[k][j] for k in range(self.cols) if ri[k]), ZERO)
                for j in range(other.cols)
            ])
        return RatMatrix(out, cols=other.cols)

    def apply(self, vec: Sequence) -> list[GaussRational]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        v = [GaussRational.coerce(x) for x in vec]
        return [sum((r[k] * v[k] for k in range(self.cols) if r[k]), ZERO) for r in self._data]

    def transpose(self) -> RatMatrix:
        return RatMatrix([[self._data[i][j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows)

    def conj_transpose(self) -> RatMatrix:
        return RatMatrix(
            [[self._data[i][j].conj() for i in range(self.rows)] for j in range(self.cols)], cols=self.rows
        )

    H = property(conj_transpose)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            self._data[i][j] == (ONE if i == j else ZERO) for i in range(self.rows) for j in range(self.cols)
        )

    def is_unitary(self) -> bool:
        return self.rows == self.cols and (self @ self.H).is_identity()

    def is_hermitian(self) -> bool:
        return self.rows == self.cols and self == self.H

    # elimination -------------------------------------------------------------
    def _integral_rows(self, extra: Sequence[GaussRational] | None = None):
        """Scale each row (and the matching entry of ``extra``) by the lcm of
        its denominators.  Real matrices come back as ``int`` rows, complex ones
        as Gaussian-integer :class:`GaussRational` rows."""
        real = self.is_real and (extra is None or all(GaussRational.coerce(x).is_real for x in extra))
        out = []
        for i, r in enumerate(self._data):
            full = list(r) + ([GaussRational.coerce(extra[i])] if extra is not None else [])
            d = 1
            for x in full:
                d = lcm(d, x.re.denominator, x.im.denominator)
            if real:
                out.append([int(x.re * d) for x in full])
            else:
                out.append([x * d for x in full])
        return out, real

    def echelon(self) -> tuple[list[list], list[int]]:
        """Fraction-free row echelon form and pivot columns."""
        rows, real = self._integral_rows()
        return _bareiss(rows, real)

    def rank(self) -> int:
        return len(self.echelon()[1])

    def kernel(self) -> list[list[GaussRational]]:
        """Basis of ``{v : M v = 0}``; one vector per free column, with a 1 in
        that column and 0 in the other free columns."""
        ech, pivots = self.echelon()
        return [[GaussRational.coerce(x) for x in v] for v in _kernel_from_echelon(ech, pivots, self.cols)]

    def solve(self, b: Sequence) -> list[GaussRational]:
        """One exact solution of ``M x = b`` (free variables set to zero)."""
        if len(b) != self.rows:
            raise ValueError("right-hand side length mismatch")
        rows, real = self._integral_rows(extra=b)
        ech, pivots = _bareiss(rows, real)
        if pivots and pivots[-1] == self.cols:
            raise InconsistentSystem("system is inconsistent")
        x: list = [Fraction(0) if real else ZERO] * self.cols
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            row = ech[r]
            s = row[self.cols]
            for c in range(pc + 1, self.cols):
                if row[c]:
                    s = s - row[c] * x[c]
            x[pc] = Fraction(s, row[pc]) if real else s / row[pc]
        return [GaussRational.coerce(v) for v in x]

    def inverse(self) -> RatMatrix:
        if self.rows != self.cols:
            raise ValueError("only square matrices are invertible")
        n = self.rows
        cols = []
        for j in range(n):
            e = [ONE if i == j else ZERO for i in range(n)]
            cols.append(self.solve(e))
        if self.rank() < n:
            raise ZeroDivisionError("matrix is singular")
        return RatMatrix([[cols[j][i] for j in range(n)] for i in range(n)], cols=n)


def _bareiss(rows: list[list], real: bool) -> tuple[list[list], list[int]]:
    a = [list(r) for r in rows]
    m = len(a)
    cols = len(a[0]) if a else 0
    prev = 1 if real else ONE
    r = 0
    pivots: list[int] = []
    for c in range(cols):
        if r >= m:
            break
        piv = next((i for i in range(r, m) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        arc = a[r][c]
        ar = a[r]
        for i in range(r + 1, m):
            ai = a[i]
            aic = ai[c]
            if real:
                for j in range(c + 1, cols):
                    num = arc * ai[j] - aic * ar[j]
                    q, rem = divmod(num, prev)
                    assert rem == 0, "Bareiss division not exact"
                    ai[j] = q
            else:
                for j in range(c + 1, cols):
                    ai[j] = (arc * ai[j] - aic * ar[j]) / prev
            ai[c] = 0 if real else ZERO
        prev = arc
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def _kernel_from_echelon(ech: list[list], pivots: list[int], cols: int) -> list[list]:
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    real = all(not isinstance(x, GaussRational) for row in ech for x in row)
    zero = Fraction(0) if real else ZERO
    one = Fraction(1) if real else ONE
    basis = []
    for f in free:
        x = [zero] * cols
        x[f] = one
        for r in range(len(pivots) - 1, -1, -1):
            pc = pivots[r]
            row = ech[r]
            s = zero
            for c in range(pc + 1, cols):
                if row[c] and x[c]:
                    s = s + row[c] * x[c]
            x[pc] = -Fraction(s) / row[pc] if real else -s / row[pc]
        basis.append(x)
    return basis


def integer_kernel(rows: list[list[int]], cols: int) -> list[list[Fraction]]:
    """Kernel of an integer matrix given as row lists (fast path used by the
    harmonic-space construction)."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    ech, pivots = _bareiss(rows, True)
    return _kernel_from_echelon(ech, pivots, cols)


def mat_kernel(M) -> list[list[GaussRational]]:
    """Exact nullspace basis of ``M`` (see :meth:`RatMatrix.kernel`)."""
    return RatMatrix.coerce(M).kernel()
