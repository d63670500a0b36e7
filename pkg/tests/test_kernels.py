from __future__ import annotations

import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hpqkit import _pykernels, kernels
from hpqkit.harmonics import harmonic_basis, harmonic_components
from hpqkit.products import product_space_support

BACKENDS = kernels.available_backends()
compiled = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")


@st.composite
def int_polys(draw, n=None, bideg=None):
    n = n or draw(st.integers(1, 4))
    a, b = bideg or (draw(st.integers(0, 4)), draw(st.integers(0, 4)))
    out = {}
    for _ in range(draw(st.integers(0, 10))):
        alpha, beta = [0] * n, [0] * n
        for _ in range(a):
            alpha[draw(st.integers(0, n - 1))] += 1
        for _ in range(b):
            beta[draw(st.integers(0, n - 1))] += 1
        c = draw(st.one_of(st.integers(-20, 20), st.integers(-(10**25), 10**25)))
        if c:
            out[_pykernels.pack(alpha, beta)] = c
    return n, a, b, out


def test_pack_round_trip():
    key = _pykernels.pack((1, 2, 0), (0, 3, 4))
    assert _pykernels.unpack(key, 3) == ((1, 2, 0), (0, 3, 4))


def test_backend_selected():
    assert kernels.BACKEND in BACKENDS and "python" in BACKENDS


def test_env_forces_python():
    env = dict(os.environ, HPQKIT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import hpqkit; print(hpqkit.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@compiled
@given(int_polys(), int_polys())
def test_mul_lincomb_agree(fa, ga):
    from hpqkit import _ckernels

    n, _, _, f = fa
    g = ga[3] if ga[0] == n else {}
    assert _ckernels.mul(f, g) == _pykernels.mul(f, g)
    assert _ckernels.laplacian(f, n) == _pykernels.laplacian(f, n)
    assert _ckernels.mul_r2(f, n) == _pykernels.mul_r2(f, n)
    assert _ckernels.lincomb(3, f, -2, g) == _pykernels.lincomb(3, f, -2, g)


@compiled
@given(int_polys(), st.data())
def test_components_and_pairing_agree(fa, data):
    from hpqkit import _ckernels

    n, a, b, f = fa
    _, _, _, g = data.draw(int_polys(n=n, bideg=(a, b)))
    assert _ckernels.components(f, n, a, b) == _pykernels.components(f, n, a, b)
    assert _ckernels.components(f, n, a, b, {0}, set()) == _pykernels.components(f, n, a, b, {0}, set())
    assert _ckernels.sphere_pair(f, g, n) == _pykernels.sphere_pair(f, g, n)


def test_kernel_identities_pure_python():
    # the scaled pairing is the sphere inner product: <z1, z1> = 1/2 at n = 2
    z1 = {_pykernels.pack((1, 0), (0, 0)): 1}
    assert _pykernels.sphere_pair(z1, z1, 2) == 1  # times 1!/(1+1)!
    lap = _pykernels.laplacian({_pykernels.pack((2, 0), (1, 0)): 1}, 2)
    assert lap == {_pykernels.pack((1, 0), (0, 0)): 8}


@pytest.mark.parametrize("backend", BACKENDS)
def test_library_results_independent_of_backend(backend):
    from hpqkit.exact import parse_poly

    f = parse_poly("z1^2*w1*w2 + 3*z1*w1 - z2^2*w2^2", 3)
    with kernels.use_backend(backend):
        assert kernels.BACKEND == backend
        comps = harmonic_components(3, f)
        rep = product_space_support(3, (2, 1), (1, 1), exhaustive=True)
    with kernels.use_backend("python"):
        assert harmonic_components(3, f) == comps
        assert product_space_support(3, (2, 1), (1, 1), exhaustive=True).support == rep.support


def test_unknown_backend():
    with pytest.raises(ValueError):
        with kernels.use_backend("fortran"):
            pass
