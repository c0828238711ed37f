"""Exception types raised by the package."""


class LowKError(Exception):
    """Base class for all package errors."""


class DomainError(LowKError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedOrderError(LowKError, ValueError):
    """Requested expansion order has no explicit formula."""


class ResonancePoleError(LowKError, ArithmeticError):
    """Transfer-matrix entry alpha vanished (tau has a pole)."""


class SingularCombinationError(LowKError, ArithmeticError):
    """1 - xi * R_r vanished in the generalized coefficients."""


class PoleError(LowKError, ArithmeticError):
    """A denominator of a Green-function route vanished."""


class NoBandBottomError(LowKError, RuntimeError):
    """No sign change of Y(E) - 1 was found for the lowest band."""


class NumericalDegeneracyError(LowKError, RuntimeError):
    """The band-bottom Bloch eigenvector could not be isolated."""


class PositivityError(LowKError, ValueError):
    """A zero-energy solution is not strictly positive."""


class ExceptionalCaseError(LowKError, ValueError):
    """psi0+ and psi0- are proportional; use the symmetric pipeline."""


class ConditioningError(LowKError, RuntimeError):
    """A small-k Laurent fit was ill-conditioned or inaccurate."""


class ConfigError(LowKError, ValueError):
    """Malformed potential configuration file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
