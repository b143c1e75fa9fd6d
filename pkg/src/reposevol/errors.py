"""Exception classes shared across the package."""


class ReposevolError(Exception):
    """Base class for all errors raised by this package."""


class MalformedJson(ReposevolError):
    """Annotation input is not syntactically valid JSON."""


class SchemaViolation(ReposevolError):
    """Annotation JSON parses but does not match the documented schema."""


class DegeneratePolygon(ReposevolError):
    """Contour has fewer than 3 vertices or encloses zero area."""


class SelfIntersecting(ReposevolError):
    """Contour is not a simple polygon."""


class OutOfBounds(ReposevolError):
    """Contour does not fit inside the requested grid."""


class UnsupportedFormat(ReposevolError):
    """Raster file is not a readable PGM/PBM mask."""


class NonPositiveInput(ReposevolError):
    """A quantity that must be strictly positive (and finite) is not."""


class AngleOutOfRange(ReposevolError):
    """Repose angle outside the open interval (0, 90) degrees."""


class InvalidPerturbation(ReposevolError):
    """Sweep perturbation list is unusable (e.g. area change <= -100%)."""


class InsufficientPoints(ReposevolError):
    """Too few points for a least-squares fit."""


class FactorTooLarge(ReposevolError):
    """Downsampling factor would leave a grid smaller than 2x2."""


class InvalidSpec(ReposevolError):
    """Synthetic pile specification violates its constraints."""


class EmptyInput(ReposevolError):
    """An operation requiring at least one element received none."""


class ConfigError(ReposevolError):
    """CLI run configuration is invalid (exit code 2)."""


class InputError(ReposevolError):
    """CLI input files are missing or unreadable (exit code 3)."""
