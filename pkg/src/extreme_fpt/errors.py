"""Exception types shared across the package."""


class ExtremeFptError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ExtremeFptError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedRegimeError(ExtremeFptError, ValueError):
    """The requested quantity has no implemented formula in this regime."""


class UnsupportedMomentError(ExtremeFptError, ValueError):
    """Only a finite set of moments is available for this law."""


class NumericalError(ExtremeFptError, RuntimeError):
    """A numerical routine failed to converge or produced an unusable result."""


class UnresolvedTailError(NumericalError):
    """The survival curve was not integrated far enough to bound its tail."""


class UnresolvedEarlyTimeError(NumericalError):
    """The survival curve grid is too coarse at early times for the requested N."""


class ConfigError(ExtremeFptError, ValueError):
    """A run configuration file is malformed or inconsistent."""
