"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument violates an operation's documented precondition."""


class FormatError(ValueError):
    """A file or byte stream does not match the expected container format."""


class ConfigError(ValueError):
    """A configuration file is malformed or contains unknown/invalid keys."""
