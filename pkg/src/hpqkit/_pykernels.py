"""Pure-Python integer polynomial kernels.

A polynomial is a ``dict`` mapping a packed monomial key to a nonzero ``int``.
The key stores ``2n`` exponent slots of :data:`SLOT_BITS` bits each: slot ``j``
holds the exponent of ``z_{j+1}`` and slot ``n + j`` the exponent of the
conjugate variable ``w_{j+1}``.  Multiplying monomials is adding keys, which is
valid while every exponent stays below ``2**SLOT_BITS``.

This module is the reference implementation; ``_ckernels`` must agree with it
term for term.
"""

from __future__ import annotations

SLOT_BITS = 8
SLOT_MASK = (1 << SLOT_BITS) - 1
MAX_EXPONENT = SLOT_MASK


def pack(alpha, beta) -> int:
    key = 0
    shift = 0
    for e in tuple(alpha) + tuple(beta):
        if e < 0 or e > MAX_EXPONENT:
            raise OverflowError(f"exponent {e} does not fit a {SLOT_BITS}-bit slot")
        key |= e << shift
        shift += SLOT_BITS
    return key


def unpack(key: int, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    exps = []
    for _ in range(2 * n):
        exps.append(key & SLOT_MASK)
        key >>= SLOT_BITS
    return tuple(exps[:n]), tuple(exps[n:])


def mul(f: dict, g: dict) -> dict:
    if len(f) < len(g):
        f, g = g, f
    out: dict = {}
    get = out.get
    for kg, cg in g.items():
        for kf, cf in f.items():
            k = kf + kg
            out[k] = get(k, 0) + cf * cg
    return {k: c for k, c in out.items() if c}


def laplacian(f: dict, n: int) -> dict:
    """``4 * sum_j d^2/dz_j dw_j`` applied term by term."""
    out: dict = {}
    get = out.get
    for key, c in f.items():
        for j in range(n):
            sa = j * SLOT_BITS
            sb = (n + j) * SLOT_BITS
            a = (key >> sa) & SLOT_MASK
            if not a:
                continue
            b = (key >> sb) & SLOT_MASK
            if not b:
                continue
            k = key - (1 << sa) - (1 << sb)
            out[k] = get(k, 0) + 4 * a * b * c
    return {k: c for k, c in out.items() if c}


def mul_r2(f: dict, n: int) -> dict:
    """Multiply by ``sum_j z_j w_j``."""
    out: dict = {}
    get = out.get
    steps = [(1 << (j * SLOT_BITS)) + (1 << ((n + j) * SLOT_BITS)) for j in range(n)]
    for key, c in f.items():
        for step in steps:
            k = key + step
            out[k] = get(k, 0) + c
    return {k: c for k, c in out.items() if c}


def lincomb(a: int, f: dict, b: int, g: dict) -> dict:
    """Return ``a*f + b*g``."""
    out = {k: a * c for k, c in f.items()} if a != 1 else dict(f)
    get = out.get
    for k, c in g.items():
        out[k] = get(k, 0) + b * c
    return {k: c for k, c in out.items() if c}


def _factorials(key: int, n: int) -> int:
    out = 1
    for j in range(n):
        e = (key >> (j * SLOT_BITS)) & SLOT_MASK
        for t in range(2, e + 1):
            out *= t
    return out


def _delta(key: int, n: int) -> tuple[int, ...]:
    return tuple(((key >> (j * SLOT_BITS)) & SLOT_MASK) - ((key >> ((n + j) * SLOT_BITS)) & SLOT_MASK)
                 for j in range(n))


def sphere_pair(f: dict, g: dict, n: int) -> int:
    """``sum c_f c_g gamma!`` over term pairs of ``f`` and ``conj(g)`` whose
    product is a diagonal monomial ``|z^gamma|^2``.

    For bidegree-homogeneous ``f`` and ``g`` of equal total degree ``m`` this
    is ``<f, g> * (n-1+m)! / (n-1)!`` on the unit sphere.
    """
    half = n * SLOT_BITS
    low = (1 << half) - 1
    buckets: dict = {}
    for kg, cg in g.items():
        buckets.setdefault(_delta(kg, n), []).append((kg, cg))
    total = 0
    for kf, cf in f.items():
        for kg, cg in buckets.get(_delta(kf, n), ()):
            # gamma = alpha_f + beta_g, the z-part of f * conj(g)
            gamma = (kf & low) + (kg >> half)
            total += cf * cg * _factorials(gamma, n)
    return total


def components(g: dict, n: int, a: int, b: int, wanted=None, emit=None):
    """Harmonic components of the bidegree-(a, b) integer polynomial ``g``.

    ``g = sum_j |z|^(2j) h_j`` with ``h_j`` harmonic of bidegree
    ``(a-j, b-j)``.  With ``L_i`` the i-th iterated Laplacian of ``g`` and
    ``m = a + b - 2j``, ``K`` the last index with ``L_(j+K) != 0``::

        D_k = 2^k k! prod_(i=1..k) (2n + 2m - 2 - 2i)
        D_K * C_j * h_j = sum_k (-1)^k (D_K / D_k) |z|^(2k) L_(j+k)
        C_j = prod_(k=1..j) 2k (2k + 2n - 2 + 2m)

    Returns ``[(j, poly, den)]`` for the nonzero ``h_j`` with ``j`` in
    ``wanted`` (all by default) and ``h_j = poly / den``; ``poly`` is None when
    ``emit`` is given and does not contain ``j``.
    """
    N = 2 * n
    laps = [g]
    for _ in range(min(a, b)):
        nxt = laplacian(laps[-1], n)
        if not nxt:
            break
        laps.append(nxt)
    out = []
    for j in range(len(laps)):
        if wanted is not None and j not in wanted:
            continue
        mj = a + b - 2 * j
        K = len(laps) - 1 - j
        D = [1]
        for k in range(1, K + 1):
            D.append(D[-1] * 2 * k * (N + 2 * mj - 2 - 2 * k))
        acc = {key: c * (-1) ** K for key, c in laps[j + K].items()}
        for k in range(K - 1, -1, -1):
            acc = lincomb(1, mul_r2(acc, n), (-1) ** k * (D[K] // D[k]), laps[j + k])
        if not acc:
            continue
        C = 1
        for k in range(1, j + 1):
            C *= 2 * k * (2 * k + N - 2 + 2 * mj)
        out.append((j, acc if emit is None or j in emit else None, D[K] * C))
    return out
