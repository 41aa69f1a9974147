"""Exception types shared across the package."""


class SpaceInputError(ValueError):
    """Raised when user-supplied data (parameters, files, bases) is malformed."""


class InvariantViolation(RuntimeError):
    """Raised when a constructed object fails one of its defining invariants.

    Carries the offending residual so callers can report it.
    """

    def __init__(self, message: str, residual: float | None = None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual
