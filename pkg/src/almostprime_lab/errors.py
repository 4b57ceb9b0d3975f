"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """An argument violates the documented precondition of an operation."""


class OutOfDomainError(ValueError):
    """A function was evaluated outside the range it was tabulated on."""


class ResourceLimitError(RuntimeError):
    """A request would exceed a configured size or memory ceiling."""


class UndefinedRatioError(ZeroDivisionError):
    """A normalised ratio was requested with a zero normaliser."""


class ConvergenceError(RuntimeError):
    """Numerical refinement stopped before reaching the requested tolerance.

    The best available estimate is kept on the exception so callers can
    still report it.
    """

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class DomainWarning(UserWarning):
    """Inputs lie outside the range where a formula is claimed to apply."""
