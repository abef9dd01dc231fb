"""Build script for the optional compiled enumeration kernels.

The package is pure Python apart from ``eventstruct._kernels``, a Cython
twin of ``eventstruct._kernels_py``.  The extension is marked optional:
if no compiler (or Cython) is available the install still succeeds and
the package falls back to the pure implementation at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "eventstruct._kernels",
                ["src/eventstruct/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
