class DimensionError(ValueError):
    """Raised when matrix/vector shapes are incompatible."""


class PreconditionViolated(ValueError):
    """Raised when an operation is applied outside its subclass of systems."""


class NotAnAeSolution(ValueError):
    pass


class CapExceeded(RuntimeError):
    """Raised when a brute-force enumeration would exceed its configured cap."""


class BudgetExceeded(RuntimeError):
    """Raised when the number of sign-vector LPs exceeds the caller's budget."""
