"""Exception hierarchy shared by every test in the package."""


class KBNormError(ValueError):
    """Base class for all errors raised by kbnorm."""


class InvalidParameterError(KBNormError):
    pass


class ShapeError(KBNormError):
    pass


class InsufficientDataError(KBNormError):
    pass


class DegenerateSampleError(KBNormError):
    """All observations coincide, so no bandwidth can be chosen."""


class DegenerateNullError(KBNormError):
    """Null-distribution moments came out non-positive."""


class SingularCovarianceError(KBNormError):
    """Empirical covariance is singular or too badly conditioned to invert."""


class DatasetParseError(KBNormError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
