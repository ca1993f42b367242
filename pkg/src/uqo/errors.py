"""Exception hierarchy shared across the package."""


class UQOError(Exception):
    """Base class for all package errors."""


class DomainError(UQOError, ValueError):
    """An argument lies outside the domain of the function."""


class SingularShiftError(DomainError):
    """Lerch shift parameter is a non-positive integer."""


class ConvergenceError(UQOError, ArithmeticError):
    """A series or quadrature failed to reach its tolerance."""


class AccuracyError(ConvergenceError):
    """An asymptotic expansion cannot meet the requested tolerance."""


class ExtrapolationError(ConvergenceError):
    """Extrapolation to zero regulator is numerically unstable."""


class UnsupportedDimensionError(DomainError):
    """Closed form only available in four spacetime dimensions."""


class ResonanceError(DomainError):
    """Duration sits on a resonance y = 2 pi k where a term is singular."""
