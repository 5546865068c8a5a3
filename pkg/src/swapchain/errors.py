class DomainError(ValueError):
    """Raised when an argument lies outside the domain an operation accepts."""


class ZeroProbabilityBranch(ArithmeticError):
    """Raised on access to the post-measurement state of an impossible outcome."""
