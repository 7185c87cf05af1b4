"""Exception hierarchy shared across the package."""


class HerglotzKitError(Exception):
    """Base class for all package errors."""


class InvalidMeasureError(HerglotzKitError):
    """A measure violates positivity, distinctness, or the growth condition."""


class DomainError(HerglotzKitError):
    """An evaluation point lies outside the operation's domain."""


class PreconditionError(HerglotzKitError):
    """An input fails a documented precondition."""


class ConvergenceError(HerglotzKitError):
    """A limit or integral estimate failed to converge.

    Carries the ladder of (step, estimate) pairs that were computed, so
    callers can inspect how the estimate behaved.
    """

    def __init__(self, message, records=None):
        super().__init__(message)
        self.records = list(records) if records is not None else []


class ExtrapolationError(ConvergenceError):
    """Richardson extrapolation produced inconsistent successive estimates."""
