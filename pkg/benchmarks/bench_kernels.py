"""Compare the compiled and pure-Python kernel backends.

Run ``python benchmarks/bench_kernels.py``.  Each workload is timed with both
backends in the same process (results are checked to be identical) and the
speedup is printed.  Harmonic bases are built once up front, so the sweep
workloads time only the multiply-and-decompose loop.
"""

from __future__ import annotations

import argparse
import random
import time

from hpqkit import kernels
from hpqkit.harmonics import harmonic_basis, harmonic_components
from hpqkit.exact.poly import BiPoly, monomials_of_bidegree
from hpqkit.products import product_sweep


def random_int_poly(rng: random.Random, n: int, p: int, q: int, terms: int) -> dict:
    keys = monomials_of_bidegree(n, p, q)
    out = {}
    for key in rng.sample(keys, min(terms, len(keys))):
        out[kernels.pack(key[:n], key[n:])] = rng.randint(-50, 50) or 1
    return out


def w_mul(rng: random.Random):
    pairs = [(random_int_poly(rng, 4, 3, 2, 40), random_int_poly(rng, 4, 2, 3, 40)) for _ in range(30)]
    return lambda: [kernels.mul(f, g) for f, g in pairs]


def w_laplacian(rng: random.Random):
    polys = [random_int_poly(rng, 4, 4, 4, 200) for _ in range(30)]
    return lambda: [kernels.laplacian(kernels.laplacian(f, 4), 4) for f in polys]


def w_decompose(rng: random.Random):
    polys = []
    for _ in range(6):
        key = rng.choice(monomials_of_bidegree(3, 4, 4))
        f = BiPoly(3, {key: 1}) * BiPoly(3, {rng.choice(monomials_of_bidegree(3, 1, 1)): 1})
        polys.append(f + f.conj())
    return lambda: [harmonic_components(3, f) for f in polys]


def w_components(rng: random.Random):
    polys = [random_int_poly(rng, 4, 4, 4, 300) for _ in range(10)]
    return lambda: [kernels.components(f, 4, 4, 4) for f in polys]


def w_gram(_rng: random.Random):
    space = harmonic_basis(4, (3, 3))
    packed = [{kernels.pack(k[:4], k[4:]): int(c.re) for k, c in b.items()} for b in space.basis[:60]]
    return lambda: [kernels.sphere_pair(f, g, 4) for f in packed for g in packed]


def _sweep(n: int, maxdeg: int):
    def make(_rng: random.Random):
        for p in range(maxdeg + 1):
            for q in range(maxdeg + 1 - p):
                harmonic_basis(n, (p, q))
        return lambda: [(r.left, r.right, sorted(r.support))
                        for r in product_sweep(n, maxdeg, exhaustive=True)]

    return make


WORKLOADS = {
    "mul (n=4, 40x40 terms)": w_mul,
    "laplacian^2 (n=4, bidegree (4,4))": w_laplacian,
    "harmonic components (n=3, degree 10)": w_decompose,
    "components (n=4, bidegree (4,4))": w_components,
    "sphere pairing (n=4, H(3,3) basis)": w_gram,
    "exhaustive sweep (n=3, p+q<=3)": _sweep(3, 3),
    "exhaustive sweep (n=4, p+q<=2)": _sweep(4, 2),
}


def timed(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (default {kernels.BACKEND})")
    print(f"{'workload':40s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for name, make in WORKLOADS.items():
        times, outs = [], []
        for b in backends:
            fn = make(random.Random(args.seed))
            with kernels.use_backend(b):
                t, out = timed(fn, args.repeat)
            times.append(t)
            outs.append(out)
        if any(o != outs[0] for o in outs[1:]):
            raise SystemExit(f"{name}: backends disagree")
        speed = f"{times[-1] / times[0]:8.1f}x" if len(times) > 1 else "       -"
        print(f"{name:40s} " + " ".join(f"{t * 1e3:8.1f}ms" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
