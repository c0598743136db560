"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the valid numeric domain (non-finite, out of range)."""


class DecodeError(ValueError):
    """A datagram could not be decoded into a safety message."""


class ConfigError(ValueError):
    """Invalid configuration value or unknown configuration key."""


class DegenerateFitError(ValueError):
    """Trajectory samples do not span a curve (e.g. all coincident)."""


class NoTargetError(LookupError):
    """No usable predecessor record is available for planning."""
