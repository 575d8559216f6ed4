"""Exception hierarchy shared across the library."""


class PatError(Exception):
    """Base class for all library-specific errors."""


class InvalidGrid(PatError):
    """Grid construction with non-power-of-two counts or non-positive steps."""


class GridMismatch(PatError):
    """Two fields or a field and an operator live on incompatible grids."""


class DepthTooLarge(PatError):
    """Requested wavelet depth exceeds the available dyadic levels."""


class ShapeMismatch(PatError):
    """Coefficient container does not match the expected pyramid layout."""


class InvalidParams(PatError):
    """Out-of-range numerical parameters (e.g. Besov exponents below 1)."""


class SupportViolation(PatError):
    """Field or phantom has mass outside its declared support region."""


class InvalidIndex(PatError):
    """Wavelet index (level, location, orientation) outside the pyramid."""


class NotConverged(PatError):
    """Iterative solver exhausted its iteration budget before the tolerance."""


class BadAperture(PatError):
    """Limited-view window outside the detector extent or time range."""


class ZeroTruth(PatError):
    """Relative error against an identically zero reference is undefined."""


class ConfigError(PatError):
    """Experiment configuration is malformed or contains unknown keys."""
