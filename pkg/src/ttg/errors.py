"""Exception types shared across the package."""


class TTGError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedRing(TTGError):
    """Raised when an operation is not defined for a ring kind."""


class FactorBoundExceeded(TTGError):
    """Raised when factorization would exceed the configured search bounds."""


class SizeLimitExceeded(TTGError):
    """Raised when a linear-algebra problem exceeds the configured size guard."""


class MalformedInput(TTGError):
    """Raised when serialized input fails to parse or validate."""
