"""Exception types that callers may want to catch individually."""


class CapExceededError(ValueError):
    """A configured resource cap (dimension, enumeration, search space) was hit."""


class DimensionCapError(CapExceededError):
    """Matrix dimension beyond the configured cap."""


class EnumerationCapError(CapExceededError):
    """Exact enumeration would exceed the configured term budget."""


class VanishingProjectionError(ArithmeticError):
    """A projection left (numerically) zero trace, so it cannot be renormalized."""

    def __init__(self, step: int, trace: float):
        self.step = step
        self.trace = trace
        super().__init__(
            f"projection at step {step} has trace {trace:.3e}; "
            "degenerate instance, cannot renormalize"
        )


class PromiseViolationError(ValueError):
    """An input pair fell outside a promise problem's domain."""


class ReplayMismatchError(ValueError):
    """A learning record is inconsistent with the measurement family it is replayed against."""
