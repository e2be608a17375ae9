"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition or type invariant."""


class CapExceededError(ValidationError):
    """A combinatorial enumeration would exceed its hard size cap."""


class ConvergenceError(RuntimeError):
    """A numerical routine could not reach the requested tolerance.

    ``achieved_error`` carries the error estimate that was actually reached,
    so callers can decide whether the partial answer is still usable.
    """

    def __init__(self, message: str, achieved_error: float):
        super().__init__(message)
        self.achieved_error = float(achieved_error)


class PreconditionError(RuntimeError):
    """A theorem-backed comparison was invoked with its hypothesis unmet."""
