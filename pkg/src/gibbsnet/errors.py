"""Exception types shared across the package."""


class GibbsNetError(Exception):
    """Base class for all package errors."""


class DimensionError(GibbsNetError, ValueError):
    """Vector lengths or parameter shapes do not match."""


class DomainError(GibbsNetError, ValueError):
    """A numeric input is outside the admissible domain (e.g. not finite)."""


class ParameterError(GibbsNetError, ValueError):
    """An argument value violates its contract."""


class ConfigError(GibbsNetError, ValueError):
    """A run configuration or artifact is invalid."""


class DataError(GibbsNetError, ValueError):
    """A dataset file could not be loaded.

    ``row`` is the 1-based data row (header excluded) when known.
    """

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class ResourceError(GibbsNetError, RuntimeError):
    """An enumeration would exceed its configured size cap."""


class AcceptanceTooLow(GibbsNetError, RuntimeError):
    """Rejection sampling ran out of attempts before collecting enough networks."""

    def __init__(self, accepted, attempts, target):
        self.accepted = accepted
        self.attempts = attempts
        self.target = target
        self.rate = accepted / attempts if attempts else 0.0
        super().__init__(
            f"accepted {accepted}/{target} zero-error networks after {attempts} "
            f"attempts (acceptance rate {self.rate:.3g})"
        )
