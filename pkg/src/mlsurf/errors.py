"""Exception types shared across the package.

NumericDegeneracyError subclasses mark inputs that are structurally valid
but sit on (or too close to) a degenerate locus of the construction; the
CLI maps them to exit code 3, plain ValueError to exit code 2.
"""


class NumericDegeneracyError(ValueError):
    """Input hits a degenerate locus of the construction."""


class PoleProximityError(NumericDegeneracyError):
    """Argument closer to a period-lattice point than the pole threshold."""


class DegenerateSpectrumError(NumericDegeneracyError):
    """Eigenvalue gap of D(lambda) below the reliability threshold."""


class BranchPointError(NumericDegeneracyError):
    """A kappa branch base vanishes (lambda^-3 psi real and u' = 0)."""


class SingularIntegrandError(NumericDegeneracyError):
    """beta/G integrand denominator vanishes inside the integration range."""


class RootCollisionError(NumericDegeneracyError):
    """Partial-fraction roots too close for the closed-form expressions."""
