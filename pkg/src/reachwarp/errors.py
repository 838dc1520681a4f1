"""Exception types shared across the package."""


class ReachwarpError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(ReachwarpError):
    """Array shapes are inconsistent with each other or with the problem."""


class DomainError(ReachwarpError):
    """A scalar or array argument lies outside its admissible range."""


class GeometryError(ReachwarpError):
    """A set description is invalid (inverted bounds, empty vertex list, ...)."""


class PreconditionError(ReachwarpError):
    """A documented call precondition was violated."""


class NumericError(ReachwarpError):
    """A numerical computation failed or produced non-finite values."""


class ConfigError(ReachwarpError):
    """A problem configuration is malformed or internally inconsistent."""
