"""Exception types shared across the package."""


class QRouletteError(Exception):
    pass


class ConfigError(QRouletteError, ValueError):
    """A game, averaging or CLI configuration is malformed."""


class UsageError(QRouletteError, ValueError):
    """An operation was called with arguments that do not fit its inputs."""
