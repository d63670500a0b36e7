# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled integer polynomial kernels.

Same contract as ``hpqkit._pykernels``.  Coefficients are accumulated in
int64 with checked arithmetic; any overflow (or a key that does not fit
64 bits) drops the call back to the pure-Python implementation, so results
are always exact.
"""

from libc.stdint cimport uint64_t, int64_t
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector
from libcpp.algorithm cimport sort
from cython.operator cimport dereference as deref, preincrement as inc

from hpqkit import _pykernels as _py

cdef extern from *:
    """
    static inline int hpq_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int hpq_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int hpq_mul_ovf(long long a, long long b, long long *r) nogil
    int hpq_add_ovf(long long a, long long b, long long *r) nogil

cdef extern from *:
    """
    typedef __int128 hpq_i128;
    static inline int hpq_mul128_ovf(hpq_i128 a, hpq_i128 b, hpq_i128 *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int hpq_add128_ovf(hpq_i128 a, hpq_i128 b, hpq_i128 *r) {
        return __builtin_add_overflow(a, b, r);
    }
    static inline unsigned long long hpq_lo(hpq_i128 x) {
        return (unsigned long long)((unsigned __int128)x);
    }
    static inline long long hpq_hi(hpq_i128 x) {
        return (long long)(x >> 64);
    }
    """
    ctypedef long long hpq_i128
    int hpq_mul128_ovf(hpq_i128 a, hpq_i128 b, hpq_i128 *r) nogil
    int hpq_add128_ovf(hpq_i128 a, hpq_i128 b, hpq_i128 *r) nogil
    unsigned long long hpq_lo(hpq_i128 x) nogil
    long long hpq_hi(hpq_i128 x) nogil

ctypedef unordered_map[uint64_t, int64_t] Poly

DEF SLOT_BITS = 8
DEF SLOT_MASK = 255
DEF MAX_N = 4
DEF MAX_FACT = 20


class _Overflow(Exception):
    pass


cdef int _load(dict f, vector[uint64_t]& keys, vector[int64_t]& coeffs) except -1:
    keys.reserve(len(f))
    coeffs.reserve(len(f))
    for k, c in f.items():
        keys.push_back(<uint64_t>k)
        coeffs.push_back(<int64_t>c)
    return 0


cdef dict _emit(unordered_map[uint64_t, int64_t]& acc):
    cdef vector[uint64_t] ks
    cdef unordered_map[uint64_t, int64_t].iterator it = acc.begin()
    while it != acc.end():
        if deref(it).second != 0:
            ks.push_back(deref(it).first)
        inc(it)
    sort(ks.begin(), ks.end())
    cdef dict out = {}
    cdef size_t i
    for i in range(ks.size()):
        out[ks[i]] = acc[ks[i]]
    return out


cdef inline int _accum(unordered_map[uint64_t, int64_t]& acc, uint64_t k, int64_t v) except -1:
    cdef long long s
    if hpq_add_ovf(acc[k], v, &s):
        raise _Overflow()
    acc[k] = s
    return 0


cdef dict _mul64(dict f, dict g):
    cdef vector[uint64_t] kf, kg
    cdef vector[int64_t] cf, cg
    _load(f, kf, cf)
    _load(g, kg, cg)
    cdef unordered_map[uint64_t, int64_t] acc
    acc.reserve(kf.size() * kg.size())
    cdef size_t i, j
    cdef long long p
    for i in range(kf.size()):
        for j in range(kg.size()):
            if hpq_mul_ovf(cf[i], cg[j], &p):
                raise _Overflow()
            _accum(acc, kf[i] + kg[j], p)
    return _emit(acc)


cdef dict _lap64(dict f, int n):
    cdef vector[uint64_t] kf
    cdef vector[int64_t] cf
    _load(f, kf, cf)
    cdef unordered_map[uint64_t, int64_t] acc
    cdef size_t i
    cdef int j
    cdef uint64_t key, a, b
    cdef long long p
    for i in range(kf.size()):
        key = kf[i]
        for j in range(n):
            a = (key >> (j * SLOT_BITS)) & SLOT_MASK
            if a == 0:
                continue
            b = (key >> ((n + j) * SLOT_BITS)) & SLOT_MASK
            if b == 0:
                continue
            if hpq_mul_ovf(cf[i], <long long>(4 * a * b), &p):
                raise _Overflow()
            _accum(acc, key - (<uint64_t>1 << (j * SLOT_BITS))
                   - (<uint64_t>1 << ((n + j) * SLOT_BITS)), p)
    return _emit(acc)


cdef dict _r2_64(dict f, int n):
    cdef vector[uint64_t] kf
    cdef vector[int64_t] cf
    _load(f, kf, cf)
    cdef unordered_map[uint64_t, int64_t] acc
    cdef size_t i
    cdef int j
    for i in range(kf.size()):
        for j in range(n):
            _accum(acc, kf[i] + (<uint64_t>1 << (j * SLOT_BITS))
                   + (<uint64_t>1 << ((n + j) * SLOT_BITS)), cf[i])
    return _emit(acc)


cdef dict _lincomb64(long long a, dict f, long long b, dict g):
    cdef vector[uint64_t] kf, kg
    cdef vector[int64_t] cf, cg
    _load(f, kf, cf)
    _load(g, kg, cg)
    cdef unordered_map[uint64_t, int64_t] acc
    cdef size_t i
    cdef long long p
    for i in range(kf.size()):
        if hpq_mul_ovf(a, cf[i], &p):
            raise _Overflow()
        _accum(acc, kf[i], p)
    for i in range(kg.size()):
        if hpq_mul_ovf(b, cg[i], &p):
            raise _Overflow()
        _accum(acc, kg[i], p)
    return _emit(acc)


def mul(dict f, dict g):
    try:
        return _mul64(f, g)
    except (_Overflow, OverflowError):
        return _py.mul(f, g)


def laplacian(dict f, int n):
    if n > MAX_N:
        return _py.laplacian(f, n)
    try:
        return _lap64(f, n)
    except (_Overflow, OverflowError):
        return _py.laplacian(f, n)


def mul_r2(dict f, int n):
    if n > MAX_N:
        return _py.mul_r2(f, n)
    try:
        return _r2_64(f, n)
    except (_Overflow, OverflowError):
        return _py.mul_r2(f, n)


def lincomb(a, dict f, b, dict g):
    try:
        return _lincomb64(a, f, b, g)
    except (_Overflow, OverflowError):
        return _py.lincomb(a, f, b, g)


# ---------------------------------------------------------------------------
# whole pipelines kept in C++ maps


cdef int _load_map(dict f, Poly& m) except -1:
    m.reserve(len(f))
    for k, c in f.items():
        m[<uint64_t>k] = <int64_t>c
    return 0


cdef void _prune(Poly& m) noexcept nogil:
    cdef vector[uint64_t] zeros
    cdef Poly.iterator it = m.begin()
    while it != m.end():
        if deref(it).second == 0:
            zeros.push_back(deref(it).first)
        inc(it)
    cdef size_t i
    for i in range(zeros.size()):
        m.erase(zeros[i])


cdef int _add_to(Poly& acc, uint64_t k, int64_t v) noexcept nogil:
    cdef int64_t* slot = &acc[k]
    cdef long long s
    if hpq_add_ovf(slot[0], v, &s):
        return 1
    slot[0] = s
    return 0


cdef int _lap_m(Poly& f, int n, Poly& out) noexcept nogil:
    cdef Poly.iterator it = f.begin()
    cdef uint64_t key, a, b
    cdef int j
    cdef long long p
    while it != f.end():
        key = deref(it).first
        for j in range(n):
            a = (key >> (j * SLOT_BITS)) & SLOT_MASK
            if a == 0:
                continue
            b = (key >> ((n + j) * SLOT_BITS)) & SLOT_MASK
            if b == 0:
                continue
            if hpq_mul_ovf(deref(it).second, <long long>(4 * a * b), &p):
                return 1
            if _add_to(out, key - (<uint64_t>1 << (j * SLOT_BITS)) - (<uint64_t>1 << ((n + j) * SLOT_BITS)), p):
                return 1
        inc(it)
    return 0


cdef int _r2_m(Poly& f, int n, Poly& out) noexcept nogil:
    cdef Poly.iterator it = f.begin()
    cdef int j
    out.reserve(f.size() * n)
    while it != f.end():
        for j in range(n):
            if _add_to(out, deref(it).first + (<uint64_t>1 << (j * SLOT_BITS))
                       + (<uint64_t>1 << ((n + j) * SLOT_BITS)), deref(it).second):
                return 1
        inc(it)
    return 0


cdef int _axpy_m(Poly& acc, int64_t s, Poly& g) noexcept nogil:
    cdef Poly.iterator it = g.begin()
    cdef long long p
    while it != g.end():
        if hpq_mul_ovf(s, deref(it).second, &p):
            return 1
        if _add_to(acc, deref(it).first, p):
            return 1
        inc(it)
    return 0


cdef list _components64(dict g, int n, int a, int b, wanted, emit):
    cdef vector[Poly] laps
    cdef int top = min(a, b), i, j, k, K, L
    cdef int N = 2 * n
    laps.push_back(Poly())
    _load_map(g, laps[0])
    _prune(laps[0])
    for i in range(top):
        laps.push_back(Poly())
        if _lap_m(laps[i], n, laps[i + 1]):
            raise _Overflow()
        _prune(laps[i + 1])
        if laps[i + 1].size() == 0:
            laps.pop_back()
            break
    L = <int>laps.size()
    cdef list out = []
    cdef Poly acc, nxt
    cdef Poly.iterator it
    cdef int64_t s
    for j in range(L):
        if wanted is not None and j not in wanted:
            continue
        mj = a + b - 2 * j
        K = L - 1 - j
        D = [1]
        d = 1
        for k in range(1, K + 1):
            d = d * 2 * k * (N + 2 * mj - 2 - 2 * k)
            D.append(d)
        acc = laps[j + K]
        if K % 2:
            it = acc.begin()
            while it != acc.end():
                deref(it).second = -deref(it).second
                inc(it)
        for k in range(K - 1, -1, -1):
            s = <int64_t>((-1) ** k * (D[K] // D[k]))
            nxt.clear()
            if _r2_m(acc, n, nxt) or _axpy_m(nxt, s, laps[j + k]):
                raise _Overflow()
            _prune(nxt)
            acc.swap(nxt)
        if acc.size() == 0:
            continue
        C = 1
        for k in range(1, j + 1):
            C *= 2 * k * (2 * k + N - 2 + 2 * mj)
        out.append((j, _emit(acc) if emit is None or j in emit else None, D[K] * C))
    return out


def components(dict g, int n, int a, int b, wanted=None, emit=None):
    if n > MAX_N:
        return _py.components(g, n, a, b, wanted, emit)
    try:
        return _components64(g, n, a, b, wanted, emit)
    except (_Overflow, OverflowError):
        return _py.components(g, n, a, b, wanted, emit)


cdef object _pair128(dict f, dict g, int n):
    cdef vector[uint64_t] kf, kg
    cdef vector[int64_t] cf, cg
    _load(f, kf, cf)
    _load(g, kg, cg)
    cdef int64_t fact[MAX_FACT + 1]
    cdef int t
    fact[0] = 1
    for t in range(1, MAX_FACT + 1):
        fact[t] = fact[t - 1] * t
    cdef int half = n * SLOT_BITS
    cdef uint64_t low = (<uint64_t>1 << half) - 1 if half < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    cdef uint64_t key, gs, e
    cdef size_t i, j
    cdef hpq_i128 total = 0, w, term
    cdef bint bad = False
    with nogil:
        for j in range(kg.size()):
            # conj(g): swap the z and w halves of the key
            gs = (kg[j] >> half) | ((kg[j] & low) << half)
            for i in range(kf.size()):
                key = kf[i] + gs
                if (key & low) != (key >> half):
                    continue
                w = 1
                for t in range(n):
                    e = (key >> (t * SLOT_BITS)) & SLOT_MASK
                    if e > MAX_FACT or hpq_mul128_ovf(w, fact[e], &w):
                        bad = True
                        break
                if bad:
                    break
                if (hpq_mul128_ovf(<hpq_i128>cf[i], <hpq_i128>cg[j], &term)
                        or hpq_mul128_ovf(term, w, &term)
                        or hpq_add128_ovf(total, term, &total)):
                    bad = True
                    break
            if bad:
                break
    if bad:
        raise _Overflow()
    return (<object>hpq_hi(total) << 64) + <object>hpq_lo(total)


def sphere_pair(dict f, dict g, int n):
    if n > MAX_N:
        return _py.sphere_pair(f, g, n)
    try:
        return _pair128(f, g, n)
    except (_Overflow, OverflowError):
        return _py.sphere_pair(f, g, n)
