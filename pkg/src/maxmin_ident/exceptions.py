"""Exception hierarchy shared by the library and the CLI."""


class MaxMinIdentError(Exception):
    """Base class for all package errors."""


class ValidationError(MaxMinIdentError, ValueError):
    """Invalid argument or malformed object."""


class GeneratorDomainError(MaxMinIdentError, ArithmeticError):
    """A generator was evaluated where its formula is undefined."""


class UnrecoverableRegionError(MaxMinIdentError, ArithmeticError):
    """No grid point carries enough mass to invert the joint law."""


class ConfigError(ValidationError):
    """Experiment configuration problem; ``field`` names the offending key."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
