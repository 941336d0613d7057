"""Exception types shared across the package."""


class AosError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(AosError, ValueError):
    """A parameter violates a documented precondition."""


class DomainError(AosError, ValueError):
    """An argument lies outside the supported domain of a function."""


class PoleError(DomainError):
    """Evaluation hit a pole (e.g. a lower hypergeometric parameter)."""


class ToleranceNotMetError(AosError, ArithmeticError):
    """A requested tolerance could not be certified within the iteration cap.

    The partially computed result is attached as ``achieved`` where available.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class NumericalInconsistencyError(AosError, ArithmeticError):
    """Two independent evaluation paths disagree beyond their joint budget."""


class UnsupportedModeError(AosError, ValueError):
    """The requested evaluation mode is not available for this object."""


class UnknownCaseError(AosError, KeyError):
    """The requested catalog case id does not exist."""
