"""Exception and warning types raised across the package."""


class SGDecohereError(Exception):
    """Base class for all package errors."""


class DomainError(SGDecohereError, ValueError):
    """Parameters lie outside the domain of the model."""


class NormalizationError(SGDecohereError):
    """Dressed coefficients fail the total-probability check (N_max too small)."""


class GridError(SGDecohereError):
    """A propagated wave packet would leave the numerical grid."""


class ConfigError(SGDecohereError):
    """Malformed or unknown configuration entries."""


class RegimeWarning(UserWarning):
    """Evaluation outside the linearized (short flight time) regime."""
