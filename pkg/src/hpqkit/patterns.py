"""Subsets of Q = {(p, q) : p, q >= 0}: closures, families and classification.

Finite sets are handled as :class:`PatternBox` truncations to total degree
``p + q <= D``; infinite families are symbolic :class:`PatternFamily`
predicates that are exact on all of Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations_with_replacement
import re
from math import gcd
from typing import Iterable, Literal

from hpqkit.harmonics import Bidegree

Rule = Literal["minus", "plus"]


@dataclass(frozen=True)
class PatternBox:
    """Finite set of bidegrees with ``p + q <= maxdeg``."""

    maxdeg: int
    members: frozenset[Bidegree] = frozenset()

    def __init__(self, maxdeg: int, members: Iterable = ()):
        if maxdeg < 0:
            raise ValueError("maxdeg must be nonnegative")
        ms = frozenset(Bidegree.of(m) for m in members)
        out = [m for m in ms if m.total > maxdeg]
        if out:
            raise ValueError(f"members outside the box p+q<={maxdeg}: {sorted(out)}")
        object.__setattr__(self, "maxdeg", maxdeg)
        object.__setattr__(self, "members", ms)

    @classmethod
    def truncate(cls, maxdeg: int, members: Iterable) -> PatternBox:
        """Like the constructor but silently drops points outside the box."""
        return cls(maxdeg, (m for m in map(Bidegree.of, members) if m.total <= maxdeg))

    @classmethod
    def full(cls, maxdeg: int) -> PatternBox:
        return cls(maxdeg, box_points(maxdeg))

    def __contains__(self, bd) -> bool:
        return Bidegree.of(bd) in self.members

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.members)

    def sorted(self) -> list[Bidegree]:
        return sorted(self.members)

    def __str__(self):
        return ";".join(f"({p},{q})" for p, q in self.sorted())


def box_points(maxdeg: int) -> list[Bidegree]:
    return [Bidegree(p, t - p) for t in range(maxdeg + 1) for p in range(t + 1)]


# ---------------------------------------------------------------------------
# the combination rule


def combine_points(a, b, rule: Rule = "minus") -> set[Bidegree]:
    """Bidegrees forced by a pair: ``(p+r-j, q+s-j)`` for ``0 <= j <= mu``,
    ``mu = min(p+q, r+s, p+r, q+s)``.

    ``rule="plus"`` gives ``(p+r+j, q+s+j)`` instead; it exists only to show
    that variant disagrees with actual product supports.
    """
    (p, q), (r, s) = Bidegree.of(a), Bidegree.of(b)
    mu = min(p + q, r + s, p + r, q + s)
    if rule == "minus":
        return {Bidegree(p + r - j, q + s - j) for j in range(mu + 1)}
    if rule == "plus":
        return {Bidegree(p + r + j, q + s + j) for j in range(mu + 1)}
    raise ValueError(f"unknown rule {rule!r}")


def closure_box(seed: PatternBox, rule: Rule = "minus") -> PatternBox:
    """Least superset of ``seed`` inside the box closed under :func:`combine_points`.

    Points that would leave the box are dropped, so membership is only
    trustworthy for the generated set inside the box.
    """
    D = seed.maxdeg
    members = set(seed.members)
    frontier = list(members)
    while frontier:
        new = set()
        for x in frontier:
            for y in list(members):
                for z in combine_points(x, y, rule):
                    if z.total <= D and z not in members:
                        new.add(z)
        members |= new
        frontier = sorted(new)
    return PatternBox(D, members)


def pattern_violations(omega: PatternBox, rule: Rule = "minus") -> list[tuple[Bidegree, Bidegree, Bidegree]]:
    """All ``(x, y, missing)`` with ``x, y`` in omega and ``missing`` a combined
    point inside the box but not in omega."""
    out = []
    pts = omega.sorted()
    for x, y in combinations_with_replacement(pts, 2):
        for z in sorted(combine_points(x, y, rule)):
            if z.total <= omega.maxdeg and z not in omega.members:
                out.append((x, y, z))
    return out


def is_pattern_box(omega: PatternBox, rule: Rule = "minus") -> bool:
    """Combinatorial algebra-pattern test inside the box.

    A truncation can pass while the untruncated set fails beyond the box.
    """
    return not pattern_violations(omega, rule)


def conjugate_pattern(omega: PatternBox) -> PatternBox:
    return PatternBox(omega.maxdeg, (Bidegree(q, p) for p, q in omega.members))


# ---------------------------------------------------------------------------
# families

FamilyKind = Literal[
    "empty", "origin", "hol", "antihol", "plurih", "full",
    "G", "GSigma", "GSigmaStar", "Gpq", "GpqN2",
]

SIX_SPACES = ("empty", "origin", "hol", "antihol", "plurih", "full")


def in_semigroup(k: int, generators: Iterable[int]) -> bool:
    """Whether ``k`` is a sum of one or more generators."""
    gens = sorted(set(generators))
    if k <= 0 or not gens:
        return False
    reach = [False] * (k + 1)
    for t in range(1, k + 1):
        reach[t] = any(g == t or (g < t and reach[t - g]) for g in gens)
    return reach[k]


def minimal_generators(values: Iterable[int], limit: int | None = None) -> tuple[int, ...]:
    """Drop values that are sums of two smaller realized values (up to ``limit``)."""
    vals = sorted(set(v for v in values if v > 0))
    keep = []
    for v in vals:
        if limit is not None and v > limit:
            continue
        if not in_semigroup(v, keep):
            keep.append(v)
    return tuple(keep)


@dataclass(frozen=True)
class PatternFamily:
    """Symbolic subset of Q.

    ``params`` holds ``(d,)`` for ``G``, the generators for ``GSigma`` /
    ``GSigmaStar`` and ``(p, q)`` for ``Gpq`` / ``GpqN2``.  ``conjugated``
    reflects the family through ``(p, q) -> (q, p)``.
    """

    kind: FamilyKind
    params: tuple[int, ...] = ()
    conjugated: bool = False

    def __post_init__(self):
        k, ps = self.kind, self.params
        if k in SIX_SPACES and ps:
            raise ValueError(f"{k} takes no parameters")
        if k == "G" and (len(ps) != 1 or ps[0] < 1):
            raise ValueError("G(d) needs one integer d >= 1")
        if k in ("GSigma", "GSigmaStar"):
            if any(g < 1 for g in ps):
                raise ValueError("semigroup generators must be positive")
            object.__setattr__(self, "params", tuple(sorted(set(ps))))
        if k in ("Gpq", "GpqN2") and (len(ps) != 2 or not ps[0] > ps[1] >= 0):
            raise ValueError(f"{k}(p,q) needs p > q >= 0")
        if k not in SIX_SPACES + ("G", "GSigma", "GSigmaStar", "Gpq", "GpqN2"):
            raise ValueError(f"unknown family {k!r}")

    def __contains__(self, bd) -> bool:
        return family_membership(self, bd)

    def box(self, maxdeg: int) -> PatternBox:
        return PatternBox(maxdeg, (b for b in box_points(maxdeg) if family_membership(self, b)))

    def conj(self) -> PatternFamily:
        return PatternFamily(self.kind, self.params, not self.conjugated)

    def __str__(self):
        k, ps = self.kind, self.params
        if k in SIX_SPACES:
            s = k
        elif k == "G":
            s = f"G(d={ps[0]})"
        else:
            s = f"{k}({','.join(map(str, ps))})"
        return f"conj:{s}" if self.conjugated else s


def _gpq_member(p: int, q: int, a: int, b: int) -> bool:
    if (a, b) == (p, q):
        return True
    diff = a - b
    if diff <= 0 or diff % (p - q):
        return False
    m = diff // (p - q)
    return m >= 2 and 0 <= b <= m * q


def gpq_n2_deleted(p: int, q: int, a: int, b: int) -> bool:
    """Points removed from G(p,q) when n = 2: ``(mp-1, mq-1)`` for m >= 2 and
    ``(2p-j, 2q-j)`` for odd ``j`` with ``0 <= j <= 2q``."""
    diff = a - b
    if diff <= 0 or diff % (p - q):
        return False
    m = diff // (p - q)
    if m < 2:
        return False
    j = m * q - b
    if j == 1:
        return True
    return m == 2 and j % 2 == 1 and 0 <= j <= 2 * q


def family_membership(fam: PatternFamily, bd) -> bool:
    p, q = Bidegree.of(bd)
    if fam.conjugated:
        p, q = q, p
    k, ps = fam.kind, fam.params
    if k == "empty":
        return False
    if k == "origin":
        return (p, q) == (0, 0)
    if k == "hol":
        return q == 0
    if k == "antihol":
        return p == 0
    if k == "plurih":
        return p == 0 or q == 0
    if k == "full":
        return True
    if k == "G":
        return (p - q) % ps[0] == 0
    if k in ("GSigma", "GSigmaStar"):
        if p == q:
            return not (k == "GSigmaStar" and p % 2 == 1)
        return in_semigroup(p - q, ps)
    if k == "Gpq":
        return _gpq_member(ps[0], ps[1], p, q)
    if k == "GpqN2":
        return _gpq_member(ps[0], ps[1], p, q) and not gpq_n2_deleted(ps[0], ps[1], p, q)
    raise AssertionError(k)


# ---------------------------------------------------------------------------
# classification


class ClassificationError(ValueError):
    pass


@dataclass
class ClassificationResult:
    family: PatternFamily
    verified_box: int
    notes: list[str] = field(default_factory=list)


def _candidates(omega: PatternBox) -> list[PatternFamily]:
    pts = omega.members
    above = [b for b in pts if b.p > b.q]
    below = [b for b in pts if b.p < b.q]
    diag = [b for b in pts if b.p == b.q and b.p > 0]
    cands: list[PatternFamily] = [PatternFamily(k) for k in SIX_SPACES]
    if above and below:
        d = reduce(gcd, (abs(b.p - b.q) for b in above + below))
        cands.insert(0, PatternFamily("G", (d,)))
    for side, conj in ((above, False), (below, True)):
        other = below if not conj else above
        if other:
            continue
        diffs = [abs(b.p - b.q) for b in side]
        if diag or not side:
            gens = minimal_generators(diffs, omega.maxdeg)
            cands.append(PatternFamily("GSigma", gens, conj))
            cands.append(PatternFamily("GSigmaStar", gens, conj))
        # any realized off-diagonal point may be the generator of G(p, q)
        for p, q in sorted(((b.p, b.q) if not conj else (b.q, b.p) for b in side), key=lambda t: (t[0] + t[1], t)):
            cands.append(PatternFamily("Gpq", (p, q), conj))
            cands.append(PatternFamily("GpqN2", (p, q), conj))
    return cands


def classify_pattern(omega: PatternBox, check_pattern: bool = True) -> ClassificationResult:
    """Name the family whose box truncation equals ``omega``.

    Candidates are derived from the data (gcd of diagonal offsets, realized
    offsets as semigroup generators, each off-diagonal point as a possible
    generator of G(p, q)); the first candidate that matches the whole box wins.  With
    ``check_pattern`` the input must pass :func:`is_pattern_box` (n >= 3
    rule); n = 2 patterns such as GpqN2 need ``check_pattern=False``.
    """
    if check_pattern and not is_pattern_box(omega):
        raise ClassificationError("input is not closed under the combination rule inside its box")
    matches = [f for f in _candidates(omega) if f.box(omega.maxdeg) == omega]
    if not matches:
        raise ClassificationError(f"no known family matches {omega} in box D={omega.maxdeg}")
    best = matches[0]
    notes = []
    others = [str(f) for f in matches[1:] if str(f) != str(best)]
    if others:
        notes.append(f"box D={omega.maxdeg} also matches: {', '.join(others)}")
    if best.kind == "G" and best.params == (1,):
        notes.append("G(d=1) is all of Q")
    if best.kind == "GpqN2":
        p, q = best.params
        notes.append(f"odd-j deletion (2p-j,2q-j) taken over 0 <= j <= {2 * q}")
    if best.kind in ("GSigma", "GSigmaStar"):
        notes.append("generators are realized offsets p-q minus pairwise-sum redundancies")
    return ClassificationResult(best, omega.maxdeg, notes)


# ---------------------------------------------------------------------------
# Moebius ladder


def m_ladder_closure(omega: PatternBox) -> PatternBox:
    """Least superset closed under: p >= 1 adds (p-1, q) and (p+1, q);
    q >= 1 adds (p, q-1) and (p, q+1).  Points leaving the box are dropped."""
    D = omega.maxdeg
    members = set(omega.members)
    stack = list(members)
    while stack:
        p, q = stack.pop()
        nbrs = []
        if p >= 1:
            nbrs += [(p - 1, q), (p + 1, q)]
        if q >= 1:
            nbrs += [(p, q - 1), (p, q + 1)]
        for x in nbrs:
            b = Bidegree(*x)
            if b.total <= D and b not in members:
                members.add(b)
                stack.append(b)
    return PatternBox(D, members)


def six_space_classify(omega: PatternBox) -> str:
    """Which of the six ladder-closed patterns ``omega`` generates."""
    closed = m_ladder_closure(omega)
    for name in SIX_SPACES:
        if PatternFamily(name).box(omega.maxdeg) == closed:
            return name
    raise AssertionError(f"ladder closure {closed} is not one of the six fixpoints")


def n2_deleted_points(a, b) -> set[Bidegree]:
    """Points of ``combine_points(a, b)`` that the n = 2 families delete.

    The deletions of GpqN2 and GSigmaStar, read per pair: for ``a`` and ``b``
    on a common ray through the origin (``p*s == q*r``, both nonzero),

    * offset ``j = 1`` is deleted (the ``(mp-1, mq-1)`` points, ``m >= 2``),
    * for ``a == b`` every odd ``j`` is deleted (the ``(2p-j, 2q-j)`` points),
    * on the diagonal every odd ``j`` is deleted (the odd ``(m, m)`` points).
    """
    (p, q), (r, s) = Bidegree.of(a), Bidegree.of(b)
    if (p, q) == (0, 0) or (r, s) == (0, 0) or p * s != q * r:
        return set()
    mu = min(p + q, r + s, p + r, q + s)
    out = set()
    for j in range(1, mu + 1):
        if j == 1 or (j % 2 == 1 and ((p, q) == (r, s) or p == q)):
            out.add(Bidegree(p + r - j, q + s - j))
    return out


# ---------------------------------------------------------------------------
# literals

_POINT = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")
_FAMILY = re.compile(r"^(conj:)?([A-Za-z0-9]+)(?:\((.*)\))?$")


def parse_points(text: str) -> list[Bidegree]:
    """``"(1,1);(2,0)"`` -> points.  An empty string is the empty set."""
    out = []
    for part in (s.strip() for s in text.split(";")):
        if not part:
            continue
        m = _POINT.fullmatch(part)
        if not m:
            raise ValueError(f"bad bidegree literal {part!r}")
        out.append(Bidegree(int(m[1]), int(m[2])))
    return out


def parse_pattern(text: str, maxdeg: int | None = None) -> PatternBox:
    """Pattern literal; the box defaults to the largest total degree present."""
    pts = parse_points(text)
    D = maxdeg if maxdeg is not None else max((b.total for b in pts), default=0)
    return PatternBox(D, pts)


def parse_family(text: str) -> PatternFamily:
    """``G(d=2)``, ``GSigma(3,5)``, ``Gpq(2,1)``, ``hol`` ... with optional ``conj:``."""
    m = _FAMILY.match(text.replace(" ", ""))
    if not m:
        raise ValueError(f"bad family literal {text!r}")
    conj, name, args = bool(m[1]), m[2], m[3]
    kinds = {k.lower(): k for k in SIX_SPACES + ("G", "GSigma", "GSigmaStar", "Gpq", "GpqN2")}
    kind = kinds.get(name.lower())
    if kind is None:
        raise ValueError(f"unknown family {name!r}")
    params: tuple[int, ...] = ()
    if args:
        try:
            params = tuple(int(a.split("=")[-1]) for a in args.split(",") if a)
        except ValueError as exc:
            raise ValueError(f"bad family parameters {args!r}") from exc
    return PatternFamily(kind, params, conj)
