"""Exception types shared across the package."""


class KLWError(Exception):
    """Base class for all errors raised by klw."""


class UsageError(KLWError, ValueError):
    """Invalid input: mismatched systems, bad words, wrong element type."""


class CapacityError(KLWError):
    """A group is larger than the configured enumeration bound."""


class TableFormatError(KLWError):
    """A stored table is truncated, malformed, or from another version."""
