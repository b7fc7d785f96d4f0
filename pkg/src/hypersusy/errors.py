"""Exception types shared across the package."""


class HypersusyError(Exception):
    """Base class for all package errors."""


class ParameterViolation(HypersusyError):
    """Family parameters violate the admissible-range constraints."""


class BoundaryDecayFailure(HypersusyError):
    """sigma*rho does not tend to zero at an interval endpoint."""


class CutoffExceeded(HypersusyError):
    """Level index at or above the family cutoff."""


class OutOfDomain(HypersusyError):
    """Point lies outside the family's open interval."""


class NoWeightPower(HypersusyError):
    """Family weight is not a pure power of sigma."""


class DegenerateDenominator(HypersusyError):
    """The shift denominator 2m + 2k + 1 vanishes."""


class IndexViolation(HypersusyError):
    """Order index out of the range 0 <= m <= l."""


class RecurrenceBreakdown(HypersusyError):
    """Division by zero in the coefficient recurrence (degenerate parameters)."""


class NotProportional(HypersusyError):
    """Constructed polynomial is not a constant multiple of the classical one."""


class DivisibilityFailure(HypersusyError):
    """An operator result does not reduce to the kappa^m * polynomial shape."""


class ContextMismatch(HypersusyError):
    """Function and operator context disagree on family or order."""


class InadmissibleGamma(HypersusyError):
    """gamma lies in (or too close to) the forbidden interval."""


class QuadratureFailure(HypersusyError):
    """Numerical integration failed; message carries the diagnostic."""


class NoConvergence(QuadratureFailure):
    """Refinement exhausted without meeting the tolerance."""


class NonFinite(QuadratureFailure):
    """Integrand or potential produced a non-finite sample."""


class GridTooCoarse(HypersusyError):
    """Eigenvalues from two grid resolutions disagree beyond tolerance."""
