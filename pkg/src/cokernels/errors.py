class ContextMismatchError(ValueError):
    """Operands live over different base rings."""


class TruncationError(ValueError):
    """The quotient level is too low to determine the requested cokernel."""


class GuardExceededError(ValueError):
    """An exhaustive enumeration would exceed the configured size guard."""
