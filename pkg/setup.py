"""Build script: compiles the optional Cython kernel backend.

The package works without the extension (a pure-Python twin of the
kernels is selected at import time), so compilation failures are not
fatal to installation.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/uhfree/_kernels_cy.pyx"],
        compiler_directives={"language_level": "3"},
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
