"""Exception types shared across the package."""


class CoresampleError(Exception):
    """Base class for all library errors."""


class ValidationError(CoresampleError, ValueError):
    """Invalid data or configuration. The CLI maps this to exit code 2."""


class NoBorderPointsError(ValidationError):
    """Oversampling was asked to draw from an empty border set."""


class UsageError(CoresampleError):
    """Bad command-line invocation. The CLI maps this to exit code 1."""
