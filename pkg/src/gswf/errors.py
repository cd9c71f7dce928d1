"""Exception types shared across the package."""


class GswfError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(GswfError, ValueError):
    """An input violates a documented precondition or invariant."""


class CapacityError(GswfError, ValueError):
    """A request exceeds a configured size ceiling (arity, budget, memory)."""


class HypothesisViolation(GswfError, ValueError):
    """A verification check was invoked outside the hypothesis it assumes."""
