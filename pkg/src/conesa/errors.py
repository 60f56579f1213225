"""Exception types shared across the package."""


class ContractViolationError(ValueError):
    """An argument violates a documented precondition (bad dimension, bad index...)."""


class DegenerateStateError(ValueError):
    """A state quantity required by a formula is degenerate (r = 0, x = 0, ...)."""
