"""Build script: compiles the optional Cython kernels.

The package works without the compiled extension (a numpy fallback is
selected at import time), so the extension is marked optional and any
build failure is non-fatal.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - cython missing entirely
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext = Extension(
        "psdyn._kernels._core",
        ["src/psdyn/_kernels/_core.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        optional=True,
    )
    ext_modules = cythonize(
        [ext],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=ext_modules)
