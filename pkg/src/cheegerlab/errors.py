class CapExceeded(ValueError):
    """Instance is larger than the configured cap for an exact method."""


class PreconditionError(ValueError):
    """Input violates a documented precondition of an operation."""
