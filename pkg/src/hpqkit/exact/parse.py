"""Text format for polynomials, Gaussian rationals and sphere points.

Grammar (whitespace insignificant)::

    poly   := ['-'] term (('+'|'-') term)*
    term   := coeff | [coeff '*'] factor ('*' factor)*
    factor := ('z'|'w') index ['^' int]
    coeff  := rat | '(' ['-'] rat [('+'|'-') rat 'i'] ')'
    rat    := int ['/' int]

``w_j`` is the conjugate variable.  Inside parentheses a lone ``rat 'i'`` is
accepted as a purely imaginary coefficient.
"""

from __future__ import annotations

from fractions import Fraction

from hpqkit.exact.gaussrat import GaussRational
from hpqkit.exact.poly import BiPoly


class PolyParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self._skip()

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str | None = None) -> str:
        c = self.peek()
        if not c or (ch is not None and c != ch):
            want = repr(ch) if ch else "a character"
            got = repr(c) if c else "end of input"
            raise PolyParseError(f"expected {want}, got {got}", self.pos, self.text)
        self.pos += 1
        self._skip()
        return c

    def int_(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise PolyParseError("expected integer", start, self.text)
        value = int(self.text[start : self.pos])
        self._skip()
        return value

    def rat(self) -> Fraction:
        num = self.int_()
        if self.peek() == "/":
            pos = self.pos
            self.take("/")
            den = self.int_()
            if den == 0:
                raise PolyParseError("zero denominator", pos, self.text)
            return Fraction(num, den)
        return Fraction(num)

    def done(self) -> bool:
        return self.pos >= len(self.text)


def _coeff(lx: _Lexer) -> GaussRational:
    if lx.peek() != "(":
        return GaussRational(lx.rat())
    lx.take("(")
    sign = 1
    if lx.peek() == "-":
        lx.take("-")
        sign = -1
    a = sign * lx.rat()
    if lx.peek() == "i":
        lx.take("i")
        lx.take(")")
        return GaussRational(0, a)
    b = Fraction(0)
    if lx.peek() in "+-" and lx.peek():
        s = 1 if lx.take() == "+" else -1
        b = s * lx.rat()
        lx.take("i")
    lx.take(")")
    return GaussRational(a, b)


def _factor(lx: _Lexer, n: int, key: list[int]):
    pos = lx.pos
    kind = lx.take()
    if kind not in "zw":
        raise PolyParseError(f"expected variable 'z' or 'w', got {kind!r}", pos, lx.text)
    idx_pos = lx.pos
    j = lx.int_()
    if not 1 <= j <= n:
        raise PolyParseError(f"variable index {j} out of range 1..{n}", idx_pos, lx.text)
    e = 1
    if lx.peek() == "^":
        lx.take("^")
        e = lx.int_()
    key[(j - 1) if kind == "z" else (n + j - 1)] += e


def _term(lx: _Lexer, n: int) -> tuple[tuple[int, ...], GaussRational]:
    key = [0] * (2 * n)
    c = GaussRational(1)
    if lx.peek() in "zw":
        _factor(lx, n, key)
    else:
        c = _coeff(lx)
        if lx.peek() != "*":
            return tuple(key), c
        lx.take("*")
        _factor(lx, n, key)
    while lx.peek() == "*":
        lx.take("*")
        _factor(lx, n, key)
    return tuple(key), c


def parse_poly(text: str, n: int) -> BiPoly:
    """Parse ``text`` into a :class:`BiPoly` in dimension ``n``.

    >>> str(parse_poly("z1*w1 - 1/2", 2))
    'z1*w1 - 1/2'
    """
    lx = _Lexer(text)
    if lx.done():
        raise PolyParseError("empty polynomial", 0, text)
    terms: dict = {}
    sign = 1
    if lx.peek() == "-":
        lx.take("-")
        sign = -1
    while True:
        key, c = _term(lx, n)
        c = c * sign
        terms[key] = terms.get(key, GaussRational(0)) + c
        if lx.done():
            break
        pos = lx.pos
        op = lx.take()
        if op not in "+-":
            raise PolyParseError(f"expected '+' or '-', got {op!r}", pos, text)
        sign = 1 if op == "+" else -1
    return BiPoly(n, terms)


def _fmt_rat(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def render_coeff(c: GaussRational) -> str:
    if c.is_real:
        return _fmt_rat(c.re)
    sign = "-" if c.im < 0 else "+"
    return f"({_fmt_rat(c.re)}{sign}{_fmt_rat(abs(c.im))}i)"


def render_poly(f: BiPoly) -> str:
    """Canonical text in descending graded-lex order; ``parse_poly`` inverts it."""
    if f.is_zero:
        return "0"
    n = f.n
    parts = []
    for idx, (key, c) in enumerate(f.items()):
        neg = c.is_real and c.re < 0
        mag = -c if neg else c
        factors = []
        for j, e in enumerate(key[:n]):
            if e:
                factors.append(f"z{j + 1}" + (f"^{e}" if e > 1 else ""))
        for j, e in enumerate(key[n:]):
            if e:
                factors.append(f"w{j + 1}" + (f"^{e}" if e > 1 else ""))
        if not factors:
            body = render_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = render_coeff(mag) + "*" + "*".join(factors)
        if idx == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def parse_gauss(text: str) -> GaussRational:
    """Parse one Gaussian rational: ``"3/5"``, ``"-1/2"``, ``"1/3+2/3i"``,
    ``"(1+2i)/3"`` or ``"2/3i"``."""
    s = text.replace(" ", "")
    if not s:
        raise PolyParseError("empty number", 0, text)
    if s.startswith("(") and ")/" in s:
        inner, den = s[1:].split(")/", 1)
        try:
            d = Fraction(den)
        except ValueError as exc:
            raise PolyParseError(f"bad denominator {den!r}", len(inner) + 3, text) from exc
        return parse_gauss(inner) / d
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if not s.endswith("i"):
        try:
            return GaussRational(Fraction(s))
        except ValueError as exc:
            raise PolyParseError(f"bad rational {s!r}", 0, text) from exc
    body = s[:-1]
    split = max(body.rfind("+"), body.rfind("-"))
    if split <= 0:
        re_s, im_s = "0", body or "1"
    else:
        re_s, im_s = body[:split], body[split:]
    if im_s in {"+", "-", ""}:
        im_s += "1"
    try:
        return GaussRational(Fraction(re_s), Fraction(im_s))
    except ValueError as exc:
        raise PolyParseError(f"bad Gaussian rational {text!r}", 0, text) from exc


def parse_point(text: str) -> list[GaussRational]:
    """Comma-separated Gaussian rationals, e.g. ``"(1+2i)/3, 2/3"``."""
    return [parse_gauss(p) for p in _split_top(text, ",")]


def _split_top(text: str, sep: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [p.strip() for p in out if p.strip()]
