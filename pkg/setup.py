"""Build script for the optional compiled Monte Carlo kernel.

The package works without the extension (a pure-numpy kernel is selected
at import time); building it just makes the `verify` path faster.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fitval._pathkernel",
                ["src/fitval/_pathkernel.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
