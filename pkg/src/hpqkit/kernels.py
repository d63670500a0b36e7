"""Backend selection for the integer polynomial kernels.

The compiled extension ``hpqkit._ckernels`` is used when it imports and
``HPQKIT_PURE_PYTHON`` is not set to a true value; otherwise the pure-Python
module is used.  Both expose ``mul``, ``laplacian``, ``mul_r2``, ``lincomb``,
``components`` and ``sphere_pair``.
"""

from __future__ import annotations

import os
from contextlib import contextmanager
from typing import Iterator

from hpqkit import _pykernels
from hpqkit._pykernels import MAX_EXPONENT, SLOT_BITS, pack, unpack

_FORCE_PURE = os.environ.get("HPQKIT_PURE_PYTHON", "").lower() in {"1", "true", "yes"}

if _FORCE_PURE:
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from hpqkit import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

mul = _impl.mul
laplacian = _impl.laplacian
mul_r2 = _impl.mul_r2
lincomb = _impl.lincomb
components = _impl.components
sphere_pair = _impl.sphere_pair


def available_backends() -> list[str]:
    try:
        from hpqkit import _ckernels  # noqa: F401
    except ImportError:
        return ["python"]
    return ["cython", "python"]


def _module(name: str):
    if name == "python":
        return _pykernels
    if name == "cython":
        from hpqkit import _ckernels

        return _ckernels
    raise ValueError(f"unknown backend {name!r}")


@contextmanager
def use_backend(name: str) -> Iterator[None]:
    """Temporarily route every kernel call through ``name``.

    Swaps module attributes, so it is meant for benchmarks and tests, not for
    code running in other threads at the same time.
    """
    global mul, laplacian, mul_r2, lincomb, components, sphere_pair, BACKEND
    impl = _module(name)
    saved = (mul, laplacian, mul_r2, lincomb, components, sphere_pair, BACKEND)
    mul, laplacian, mul_r2, lincomb = impl.mul, impl.laplacian, impl.mul_r2, impl.lincomb
    components, sphere_pair, BACKEND = impl.components, impl.sphere_pair, name
    try:
        yield
    finally:
        mul, laplacian, mul_r2, lincomb, components, sphere_pair, BACKEND = saved

__all__ = [
    "BACKEND",
    "available_backends",
    "components",
    "sphere_pair",
    "use_backend",
    "MAX_EXPONENT",
    "SLOT_BITS",
    "laplacian",
    "lincomb",
    "mul",
    "mul_r2",
    "pack",
    "unpack",
]
