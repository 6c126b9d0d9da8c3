"""Exception hierarchy shared across the pipeline."""


class ShopminerError(Exception):
    """Base class for all pipeline errors."""


class ConfigurationError(ShopminerError):
    """A configuration value is invalid or degenerate."""


class DataError(ShopminerError):
    """Input data violates its schema or is otherwise unusable.

    ``context`` carries file/line information when available.
    """

    def __init__(self, message, context=None):
        super().__init__(message if context is None else f"{context}: {message}")
        self.context = context


class TransportError(ShopminerError):
    """A fetch could not be completed (network failure, missing fixture)."""


class FixtureMissError(TransportError):
    """The fixture store has no recording for the requested URL."""


class ShopGoneError(ShopminerError):
    """A shop existed at validation time but vanished before retrieval."""


class InsufficientDataError(DataError):
    """Not enough data points for the requested statistic."""
