"""Per-mode convergence analysis of one-level Schwarz methods in waveguides."""

from .cross_section import Annulus, BoundaryFamily, Disk, RasterMask, Rectangle, transverse_spectrum
from .errors import (
    ConfigError,
    CutoffError,
    DomainError,
    NumericError,
    PmlResonanceError,
    ResourceError,
    SingularDenominatorError,
    SingularInterfaceError,
    WgSchwarzError,
)
from .kernels import BACKEND
from .modal import Classification, Family, Mode, build_mode_catalog
from .schwarz import (
    BlockToeplitzOperator,
    DecompositionGeometry,
    SchwarzBlock,
    block_coefficients,
    interface_matrices,
    limiting_radius,
    nilpotency_degree,
    schwarz_block,
)
from .spectral import eigenvalues_dense, fixed_point_run, gmres_solve, power_iteration, spectral_radius
from .sweep import SweepConfig, SweepResult
from .transmission import TransmissionKind, TransmissionSpec, transmission_symbol

__version__ = "0.1.0"

__all__ = [
    "Annulus",
    "BACKEND",
    "BlockToeplitzOperator",
    "BoundaryFamily",
    "Classification",
    "ConfigError",
    "CutoffError",
    "DecompositionGeometry",
    "Disk",
    "DomainError",
    "Family",
    "Mode",
    "NumericError",
    "PmlResonanceError",
    "RasterMask",
    "Rectangle",
    "ResourceError",
    "SchwarzBlock",
    "SingularDenominatorError",
    "SingularInterfaceError",
    "SweepConfig",
    "SweepResult",
    "TransmissionKind",
    "TransmissionSpec",
    "WgSchwarzError",
    "block_coefficients",
    "build_mode_catalog",
    "eigenvalues_dense",
    "fixed_point_run",
    "gmres_solve",
    "interface_matrices",
    "limiting_radius",
    "nilpotency_degree",
    "power_iteration",
    "schwarz_block",
    "spectral_radius",
    "transmission_symbol",
    "transverse_spectrum",
]
