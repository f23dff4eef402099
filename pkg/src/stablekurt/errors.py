"""Exception types raised across the package."""


class StableKurtError(Exception):
    """Base class for all package errors."""


class ParameterError(StableKurtError, ValueError):
    """Invalid parameter or configuration."""


class InsufficientDataError(StableKurtError, ValueError):
    """Too few observations for the requested statistic."""


class DegenerateSampleError(StableKurtError, ValueError):
    """Sample (or prefix of a sample) has zero variance.

    ``checkpoint`` is set when the failure came from a prefix of a growth curve.
    """

    def __init__(self, message, checkpoint=None):
        super().__init__(message)
        self.checkpoint = checkpoint


class NumericDomainError(StableKurtError, ArithmeticError):
    """A quantity left the domain where its logarithm is defined."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class IngestionError(StableKurtError, ValueError):
    """Price file could not be parsed or validated."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
