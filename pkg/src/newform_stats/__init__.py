"""Statistics and arithmetic for catalogs of prime-level weight-2 newforms."""

__version__ = "0.1.0"


class NewformStatsError(Exception):
    """Base class for errors raised by this package."""


class ParseError(NewformStatsError):
    """Malformed input file."""


class ValidationError(NewformStatsError):
    """Input parsed but violates a record invariant."""


class ComputeError(NewformStatsError):
    """A computation could not be carried out (degenerate input, cost guard, ...)."""


class ConfigurationError(NewformStatsError):
    """Missing or inconsistent configuration for the requested operation."""
