"""Translationally equivariant minimal Lagrangian surfaces in CP^2.

Numerical construction of the explicit loop-group factorization for such
surfaces: Weierstrass elliptic data, metric profiles, spectral data of the
potential matrix, the Q/beta_1/beta_2 factors, extended frames, canonical
lifts and closing conditions — each with the identities it satisfies
exposed as verification suites.
"""

from .backend import backend_name

__version__ = "0.1.0"

__all__ = ["backend_name", "__version__"]
