"""Exception and warning types shared across the package."""


class TomoqkdError(Exception):
    """Base class for all library errors."""


class InvalidDistributionError(TomoqkdError, ValueError):
    """A probability vector has negative entries or does not sum to 1."""


class DomainError(TomoqkdError, ValueError):
    """A scalar parameter lies outside its documented domain."""


class NotPositiveSemidefiniteError(TomoqkdError, ValueError):
    """A matrix expected to be PSD has an eigenvalue below tolerance."""


class UnsupportedDimensionError(TomoqkdError, ValueError):
    """Requested dimension is not a prime (only prime d is supported)."""


class ZeroProbabilityOutcomeError(TomoqkdError, ValueError):
    """Conditioning on an outcome whose probability is numerically zero."""


class NotCompletelyPositiveError(TomoqkdError, ValueError):
    """An affine qubit map does not correspond to a CP channel."""


class InvalidChannelError(TomoqkdError, ValueError):
    """Kraus operators violate the completeness relation."""


class InconsistentDataError(TomoqkdError, ValueError):
    """A noiseless probability table is not consistent with any channel."""


class InconsistentStatisticsError(TomoqkdError, ValueError):
    """Error vectors produce a Bell spectrum with large negative entries."""


class ReconstructionFailureError(TomoqkdError, ValueError):
    """A reconstructed state violates positivity beyond tolerance."""


class TableParseError(TomoqkdError, ValueError):
    """A probability-table file is malformed; message carries the location."""


class NonuniformMarginalWarning(UserWarning):
    """Alice's computational marginal deviates from uniform."""


class ClippedSpectrumWarning(UserWarning):
    """Small negative Bell-spectrum entries were clipped to zero."""


class ReconstructionWarning(UserWarning):
    """Solver residual exceeded the configured noisy-data threshold."""
