"""Exception types shared across the package."""


class EwalkError(Exception):
    """Base class for all package-specific errors."""


class DomainError(EwalkError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class WindowOverflowError(DomainError):
    """A walk step would push amplitude beyond the allocated site window."""


class FitError(EwalkError, RuntimeError):
    """A fit could not be performed (insufficient or non-decaying data)."""


class ConfigError(EwalkError, ValueError):
    """A run configuration failed validation."""
