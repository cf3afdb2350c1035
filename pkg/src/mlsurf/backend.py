"""Kernel backend selection.

The compiled kernels (mlsurf._wp_cy, built from Cython) are preferred; the
pure-Python twins are used when the extension is missing or when the
environment variable MLSURF_PURE_PYTHON is set (to anything non-empty).
Both expose the same functions with identical semantics.
"""

import os

from . import _wp_py

if os.environ.get("MLSURF_PURE_PYTHON"):
    _impl = _wp_py
else:
    try:
        from . import _wp_cy as _impl
    except ImportError:
        _impl = _wp_py

wp_pair = _impl.wp_pair
zeta = _impl.zeta
sigma = _impl.sigma
series_coefficients = _impl.series_coefficients


def backend_name():
    """'compiled' when the Cython kernels are active, else 'pure-python'."""
    return "compiled" if _impl.__name__.endswith("_wp_cy") else "pure-python"
