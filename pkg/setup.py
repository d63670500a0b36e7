"""Optional compiled kernels.

If Cython or a C++ compiler is unavailable the package installs without
``hpqkit._ckernels`` and the pure-Python kernels are used.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "hpqkit._ckernels",
                ["src/hpqkit/_ckernels.pyx"],
                language="c++",
                extra_compile_args=["-O3", "-std=c++17"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build environment dependent
    print(f"hpqkit: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
