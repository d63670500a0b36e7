"""Monte Carlo estimates on the sphere: Haar averages and Moebius compositions.

Everything here is double precision.  Randomness comes from a
:class:`HaarSampler`, which splits each request into fixed-size chunks with
their own ``SeedSequence((seed, stream, chunk))``, so a result depends only
on ``(seed, N)`` and never on how many threads produced it.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from hpqkit.exact.poly import BiPoly
from hpqkit.harmonics import Bidegree, SpherePoint, _ctx, harmonic_basis, integrate, zonal_kernel

CHUNK = 8192
THRESHOLD = 4.0
NONZERO_FLOOR = 1e-3

_SPHERE, _UNITARY = 0, 1

Evaluable = Callable[[np.ndarray], np.ndarray]


class SingularAutomorphism(ValueError):
    pass


@dataclass(frozen=True)
class BallAutomorphism:
    """The involution phi_a of the unit ball swapping ``a`` and 0."""

    a: np.ndarray

    def __init__(self, a: Sequence[complex]):
        arr = np.asarray(a, dtype=complex).reshape(-1)
        if not np.linalg.norm(arr) < 1:
            raise ValueError("a must lie in the open unit ball")
        object.__setattr__(self, "a", arr)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def __call__(self, z) -> np.ndarray:
        return automorphism_apply(self, z)


def automorphism_apply(phi: BallAutomorphism, z) -> np.ndarray:
    """phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>); rows of ``z`` are points.

    ``a = 0`` is the limit case ``z -> -z``.
    """
    a = phi.a
    z = np.asarray(z, dtype=complex)
    if z.shape[-1] != a.shape[0]:
        raise ValueError(f"point dimension {z.shape[-1]} != {a.shape[0]}")
    aa = float(np.vdot(a, a).real)
    if aa == 0.0:
        return -z
    za = z @ a.conj()
    den = 1 - za
    if np.any(np.abs(den) < 1e-14):
        raise SingularAutomorphism("1 - <z,a> vanishes")
    pz = za[..., None] * (a / aa)
    s = math.sqrt(1 - aa)
    return (a - pz - s * (z - pz)) / den[..., None]


@dataclass(frozen=True)
class QuadEstimate:
    value: complex
    stderr: float
    samples: int

    @classmethod
    def from_values(cls, values: np.ndarray) -> QuadEstimate:
        v = np.asarray(values, dtype=complex).reshape(-1)
        N = v.size
        if N < 2:
            raise ValueError("need at least two samples")
        mean = v.mean()
        var = float(np.sum(np.abs(v - mean) ** 2)) / (N - 1)
        return cls(complex(mean), math.sqrt(var / N), N)

    def agrees(self, target: complex, k: float = THRESHOLD) -> bool:
        """``|value - target| <= k * stderr`` (plus rounding slack for exact zeros of stderr)."""
        return abs(self.value - complex(target)) <= k * self.stderr + 1e-12

    def nonzero(self, k: float = THRESHOLD, floor: float = NONZERO_FLOOR) -> bool:
        mag = abs(self.value)
        return mag > k * self.stderr and mag > floor


class HaarSampler:
    """Uniform points on S and Haar unitaries in dimension ``n``."""

    def __init__(self, seed: int, n: int, threads: int = 1):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.seed = int(seed) & (2**64 - 1)
        self.n = n
        self.threads = max(1, threads)

    def _rng(self, stream: int, chunk: int) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self.seed, stream, chunk]))

    def _chunked(self, N: int, make: Callable[[np.random.Generator, int], np.ndarray], stream: int) -> np.ndarray:
        sizes = [min(CHUNK, N - s) for s in range(0, N, CHUNK)]
        jobs = [(i, m) for i, m in enumerate(sizes)]
        run = lambda im: make(self._rng(stream, im[0]), im[1])  # noqa: E731
        if self.threads > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(self.threads) as ex:
                parts = list(ex.map(run, jobs))
        else:
            parts = [run(j) for j in jobs]
        return np.concatenate(parts) if parts else np.empty((0,), complex)

    def _gauss(self, rng: np.random.Generator, shape) -> np.ndarray:
        g = rng.standard_normal(shape + (2,))
        return (g[..., 0] + 1j * g[..., 1]) / math.sqrt(2)

    def sphere(self, N: int) -> np.ndarray:
        """``(N, n)`` array of points uniform on S (normalized complex Gaussians)."""

        def make(rng, m):
            g = self._gauss(rng, (m, self.n))
            return g / np.linalg.norm(g, axis=1, keepdims=True)

        return self._chunked(N, make, _SPHERE)

    def unitaries(self, N: int) -> np.ndarray:
        """``(N, n, n)`` Haar unitaries: QR of a Gaussian matrix, R's diagonal made positive."""

        def make(rng, m):
            g = self._gauss(rng, (m, self.n, self.n))
            q, r = np.linalg.qr(g)
            d = np.diagonal(r, axis1=1, axis2=2)
            return q * (d / np.abs(d))[:, None, :]

        return self._chunked(N, make, _UNITARY)


def poly_evaluator(f: BiPoly) -> Evaluable:
    """Vectorized float evaluation of ``f`` at the rows of an ``(N, n)`` array."""
    n = f.n
    items = list(f.items())
    A = np.array([k[:n] for k, _ in items], dtype=int).reshape(len(items), n)
    B = np.array([k[n:] for k, _ in items], dtype=int).reshape(len(items), n)
    c = np.array([complex(v) for _, v in items], dtype=complex)

    def ev(Z: np.ndarray) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex)
        if Z.shape[-1] != n:
            raise ValueError(f"expected points in C^{n}")
        if not items:
            return np.zeros(Z.shape[:-1], complex)
        Zc = Z.conj()
        out = np.zeros(Z.shape[:-1], complex)
        for t in range(len(items)):
            term = np.full(Z.shape[:-1], c[t])
            for j in range(n):
                if A[t, j]:
                    term = term * Z[..., j] ** A[t, j]
                if B[t, j]:
                    term = term * Zc[..., j] ** B[t, j]
            out += term
        return out

    return ev


def _evaluable(f) -> Evaluable:
    return poly_evaluator(f) if isinstance(f, BiPoly) else f


def compose(f, phi: BallAutomorphism) -> Evaluable:
    """``f o phi`` as a vectorized function on points of S."""
    ev = _evaluable(f)
    return lambda Z: ev(automorphism_apply(phi, Z))


def mc_integrate(f, sampler: HaarSampler, N: int) -> QuadEstimate:
    """Mean of ``f`` over ``N`` uniform points of S."""
    if N < 2:
        raise ValueError("N must be >= 2")
    return QuadEstimate.from_values(_evaluable(f)(sampler.sphere(N)))


class HaarCheck(NamedTuple):
    mc: QuadEstimate
    exact: complex

    @property
    def agrees(self) -> bool:
        return self.mc.agrees(self.exact)


def haar_average_check(f: BiPoly, z: Sequence[complex], sampler: HaarSampler, N: int) -> HaarCheck:
    """Average of ``f(U z)`` over Haar unitaries against the exact sphere integral of ``f``."""
    zf = np.asarray([complex(c) for c in z], dtype=complex)
    if abs(np.linalg.norm(zf) - 1) > 1e-12:
        raise ValueError("z must be a unit vector")
    U = sampler.unitaries(N)
    values = poly_evaluator(f)(U @ zf)
    exact = complex(integrate(f.n, f))
    return HaarCheck(QuadEstimate.from_values(values), exact)


def _unit(n: int) -> SpherePoint:
    return SpherePoint([1] + [0] * (n - 1))


def kernel_evaluator(ctx, bd, z0: SpherePoint | None = None) -> Evaluable | None:
    """Float evaluator of K_{z0} for H(bd); ``None`` when the space is zero."""
    ctx = _ctx(ctx)
    space = harmonic_basis(ctx, bd)
    if space.dim == 0:
        return None
    return poly_evaluator(zonal_kernel(space, z0 or _unit(ctx.n)).kernel)


def _project_values(fv: np.ndarray, Z: np.ndarray, kev: Evaluable | None) -> QuadEstimate:
    if kev is None:
        return QuadEstimate(0j, 0.0, len(Z))
    return QuadEstimate.from_values(fv * kev(Z).conj())


def mc_project(f, bd, ctx, sampler: HaarSampler, N: int, z0: SpherePoint | None = None) -> QuadEstimate:
    """Estimate (pi_bd f)(z0) = int f conj(K_{z0}) dsigma; ``z0`` defaults to e_1."""
    ctx = _ctx(ctx)
    Z = sampler.sphere(N)
    return _project_values(_evaluable(f)(Z), Z, kernel_evaluator(ctx, bd, z0))


@dataclass
class LadderEntry:
    basis_index: int
    point_index: int
    target: Bidegree
    estimate: QuadEstimate

    @property
    def nonzero(self) -> bool:
        return self.estimate.nonzero()


@dataclass
class LadderReport:
    """Projections of ``f o phi_a`` for the basis ``f`` of H(p,q).

    Each projection is evaluated at the coordinate points e_1..e_n; a nonzero
    value at any of them shows the component is nonzero.  ``evidence`` maps
    each target to whether some basis element reaches it; ``antiholomorphic_zero``
    is set for q = 0 and says every probed component with q' > 0 is zero within
    the threshold.
    """

    source: Bidegree
    a: tuple[complex, ...]
    samples: int
    entries: list[LadderEntry] = field(default_factory=list)
    evidence: dict[Bidegree, bool] = field(default_factory=dict)
    antiholomorphic_probes: list[LadderEntry] = field(default_factory=list)
    antiholomorphic_zero: bool | None = None

    @property
    def ok(self) -> bool:
        return all(self.evidence.values()) and self.antiholomorphic_zero is not False


def _coordinate_points(n: int) -> list[SpherePoint]:
    return [SpherePoint([1 if i == k else 0 for i in range(n)]) for k in range(n)]


def moebius_ladder_evidence(p: int, q: int, a, ctx, sampler: HaarSampler, N: int,
                            targets: Sequence | None = None) -> LadderReport:
    """Monte Carlo evidence that ``f o phi_a`` reaches (p-1,q) and (p+1,q).

    All projections share one sample of S.  For holomorphic sources every
    bidegree (p', q') with q' > 0 and p' + q' <= p + 2 is also probed.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    ctx = _ctx(ctx)
    src = Bidegree(p, q)
    phi = BallAutomorphism(a)
    if phi.n != ctx.n:
        raise ValueError("a has the wrong dimension")
    targets = [Bidegree.of(t) for t in (targets or [(p - 1, q), (p + 1, q)])]
    points = _coordinate_points(ctx.n)
    Z = sampler.sphere(N)
    W = automorphism_apply(phi, Z)
    values = [poly_evaluator(f)(W) for f in harmonic_basis(ctx, src).basis]

    def probe(t: Bidegree) -> list[LadderEntry]:
        out = []
        for k, z0 in enumerate(points):
            kev = kernel_evaluator(ctx, t, z0)
            for i, fv in enumerate(values):
                out.append(LadderEntry(i, k, t, _project_values(fv, Z, kev)))
        return out

    rep = LadderReport(src, tuple(complex(x) for x in phi.a), N)
    for t in targets:
        found = probe(t)
        rep.entries.extend(found)
        rep.evidence[t] = any(e.nonzero for e in found)
    if q == 0:
        for t in (Bidegree(pp, qq) for qq in range(1, p + 3) for pp in range(p + 3 - qq)):
            rep.antiholomorphic_probes.extend(probe(t))
        rep.antiholomorphic_zero = all(e.estimate.agrees(0) for e in rep.antiholomorphic_probes)
    return rep
