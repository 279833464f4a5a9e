"""Exception hierarchy shared across the package."""


class ItsaError(Exception):
    """Base class for all errors raised by this package."""


class DataError(ItsaError):
    """Invalid or malformed input data."""


class DesignError(ItsaError):
    """Invalid design-matrix construction or mismatch."""


class FitError(ItsaError):
    """Model estimation failed or was called on invalid inputs."""
