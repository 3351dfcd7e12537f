"""Build script for the optional compiled phase-sum kernel.

The package is pure Python plus one small Cython extension for the hot
inner loop (sums of complex phases over dense time grids).  The extension
is optional: if Cython or a C compiler is unavailable the build still
succeeds and the package falls back to a vectorised NumPy implementation
selected at import time (see rpsense.kernels).
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "rpsense._phase_kernel",
        sources=["src/rpsense/_phase_kernel.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level=3)
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
