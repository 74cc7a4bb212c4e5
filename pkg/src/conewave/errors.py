"""Exception hierarchy shared by all conewave modules."""


class ConewaveError(Exception):
    """Base class for all conewave errors."""


class DomainError(ConewaveError):
    """Input outside the mathematical domain of the operation."""


class RangeError(ConewaveError):
    """Requested value outside the attainable range (e.g. velocity inversion)."""


class ConvexityError(ConewaveError):
    """Second derivative of the symbol fails strict positivity on the band."""


class ConcavityError(ConewaveError):
    """Phase second derivative fails strict negativity where required."""


class AccuracyError(ConewaveError):
    """A quadrature or truncation target could not be met within its budget."""


class StationaryPointInBandError(ConewaveError):
    """Non-stationary-phase estimate requested but the phase derivative
    changes sign (or vanishes) on the band."""


class DegenerateBandError(ConewaveError):
    """Group-velocity variance of the profile is numerically zero, so no
    unique variance-minimizing time exists."""


class EmptyFieldError(ConewaveError):
    """Sampled field carries (numerically) no mass."""
