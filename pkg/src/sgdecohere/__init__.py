"""Spatial decoherence of an atom's centre of mass in the optical Stern-Gerlach model."""
from .density import DecoherenceModel, DensityGrid, DensitySlice
from .dressed import DiagonalCoefficients, QubitState, diagonal
from .errors import (ConfigError, DomainError, GridError, NormalizationError,
                     RegimeWarning)
from .fields import FieldKind, FieldState
from .params import PhysicalParams, derive_params, reference_params, rabi_and_horizon

__all__ = [
    "ConfigError", "DecoherenceModel", "DensityGrid", "DensitySlice",
    "DiagonalCoefficients", "DomainError", "FieldKind", "FieldState", "GridError",
    "NormalizationError", "PhysicalParams", "QubitState", "RegimeWarning",
    "derive_params", "diagonal", "reference_params", "rabi_and_horizon",
]
__version__ = "0.1.0"
