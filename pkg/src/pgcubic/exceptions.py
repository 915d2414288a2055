"""Exception types raised by pgcubic."""


class PGCubicError(Exception):
    """Base class for all package errors."""


class DegenerateDegreeError(PGCubicError, ValueError):
    """Leading coefficient vanishes, so the map is not a cubic."""


class SingularParametrizationError(PGCubicError, ValueError):
    """A denominator of the moment parametrization fell below the floor."""


class ConfigurationError(PGCubicError, ValueError):
    pass


class DomainError(PGCubicError, ValueError):
    """Input lies outside the domain where an operation is defined."""


class PreconditionError(PGCubicError, ValueError):
    pass


class ClassificationError(PGCubicError, ValueError):
    """Operation requested on data of the wrong category."""


class NumericalError(PGCubicError, RuntimeError):
    """A bracket or iteration failed where the theory says it cannot."""
