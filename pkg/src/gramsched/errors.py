"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A problem instance violates one of its invariants."""


class ZeroColumnError(ValidationError):
    """An input column is identically zero, so its actuator can never act."""


class NonFiniteError(ArithmeticError):
    """A computation produced (or was handed) NaN/Inf values."""


class NegativeValueError(ValueError):
    """A sampled profile contains negative values."""


class OutOfDomainError(ValueError):
    """An evaluation point lies outside the function's domain."""


class DomainMismatchError(ValueError):
    """Two sampled profiles do not share the same grid."""


class IntervalOutOfRangeError(ValueError):
    """A schedule interval exits the time horizon."""


class InsufficientLevelSetError(RuntimeError):
    """The threshold level set cannot absorb the requested free measure."""
