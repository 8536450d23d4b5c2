"""Exception types shared across the toolkit."""


class ConfigurationError(ValueError):
    """Raised for invalid parameters, step sizes, ranges, or config files."""


class InvalidStateError(ValueError):
    """Raised when a physical quantity is non-finite or out of its domain."""


class TransitionError(ValueError):
    """Raised when a geometric configuration command is not a legal move."""
