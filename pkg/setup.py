"""Build script for the optional compiled kernel.

The package works without the extension (a pure-Python fallback is selected
at import time); building it just makes the Weierstrass kernels fast.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("mlsurf._wp_cy", ["src/mlsurf/_wp_cy.pyx"])],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
