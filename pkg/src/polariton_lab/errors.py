"""Exception types shared across modules."""


class NumericalError(RuntimeError):
    """A computation could not produce a trustworthy result."""


class ConvergenceError(NumericalError):
    pass


class SingularMatrixError(NumericalError):
    def __init__(self, message: str, pivot: float):
        super().__init__(message)
        self.pivot = pivot


class DegenerateKernelError(NumericalError):
    pass


class NonlinearResponseError(NumericalError):
    pass


class NotHermitianError(ValueError):
    pass


class RegimeError(ValueError):
    """Parameters put the system outside the regime an operation requires."""
