"""Exception types shared across the package."""


class RemimoError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(RemimoError, ValueError):
    """An argument is outside its documented domain."""


class CapacityError(RemimoError):
    """A requested enumeration exceeds the enforced size cap."""


class SingularChannelError(RemimoError):
    """The effective channel has zero Frobenius norm and cannot be inverted out."""


class DegenerateRotationError(RemimoError):
    """The rotation leaves the conditioning direction undefined (alpha = 0)."""


class DesignRejectedError(RemimoError):
    """The requested code design is not uniquely decodable."""


class InsufficientDataError(RemimoError):
    """Not enough usable data points for the requested estimate."""


class ConfigError(RemimoError, ValueError):
    """A simulation configuration file or flag set is invalid."""
