"""Exception types shared across verdant."""


class VerdantError(Exception):
    """Base class for all errors raised by verdant."""


class ValidationError(VerdantError, ValueError):
    """Input data violates a structural invariant."""


class AlignmentError(ValidationError):
    """Raster grids do not share origin, cell size and shape."""


class NoSitesError(VerdantError, ValueError):
    """A partition was requested with no participating sites."""


class InsufficientDataError(VerdantError, ValueError):
    """Too few usable records for a statistic."""
