"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigurationError(ValueError):
    """A combination of arguments cannot describe a valid setup."""


class TimingResolutionWarning(UserWarning):
    """A benchmark ran too briefly for its timing to be trusted."""
