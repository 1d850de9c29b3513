"""Axial wavenumbers, modal symbols and mode catalogs."""

from __future__ import annotations

import cmath
import enum
import logging
from dataclasses import dataclass

from .cross_section import BoundaryFamily, CrossSection, tem_count, transverse_spectrum
from .errors import CutoffError, DomainError

log = logging.getLogger(__name__)

CUTOFF_TOL = 1e-10


class Family(str, enum.Enum):
    TE = "te"
    TM = "tm"
    TEM = "tem"


class Classification(str, enum.Enum):
    PROPAGATIVE = "propagative"
    EVANESCENT = "evanescent"


def check_wavenumber(k: complex) -> complex:
    k = complex(k)
    if k == 0:
        raise DomainError("wavenumber must be nonzero")
    if k.imag < 0:
        raise DomainError(f"wavenumber must satisfy Im k >= 0, got {k}")
    return k


def axial_wavenumber(k: complex, r: float, cutoff_tol: float = CUTOFF_TOL) -> complex:
    """``sqrt(k^2 - r^2)`` on the branch ``Im >= 0`` (``Re > 0`` when real)."""
    k = check_wavenumber(k)
    if r < 0:
        raise DomainError(f"transverse wavenumber must be nonnegative, got {r}")
    z = k * k - r * r
    if abs(z) <= cutoff_tol * abs(k) ** 2:
        raise CutoffError(f"r={r} is at cut-off for k={k} (|k^2-r^2|={abs(z):.3g})")
    beta = cmath.sqrt(z)
    if beta.imag < 0 or (beta.imag == 0 and beta.real < 0):
        beta = -beta
    if beta.imag == 0:
        beta = complex(beta.real, 0.0)
    return beta


def modal_symbol(family: Family, k: complex, beta: complex) -> complex:
    """Symbol of ``((curl E) x n) x n`` on one modal trace."""
    family = Family(family)
    if beta == 0:
        raise DomainError("axial wavenumber must be nonzero")
    if family is Family.TM:
        return 1j * complex(k) ** 2 / beta
    return 1j * complex(beta)


def classify(k: complex, r: float) -> Classification:
    if (complex(k) ** 2 - r * r).real > 0:
        return Classification.PROPAGATIVE
    return Classification.EVANESCENT


@dataclass(frozen=True)
class Mode:
    family: Family
    index: int
    r: float
    k: complex
    beta: complex
    kappa: complex
    classification: Classification

    @classmethod
    def build(cls, family: Family, k: complex, r: float, index: int = 1, cutoff_tol: float = CUTOFF_TOL) -> "Mode":
        family = Family(family)
        k = check_wavenumber(k)
        if family is Family.TEM:
            if r != 0:
                raise DomainError("TEM modes have r = 0")
            beta = k
        else:
            beta = axial_wavenumber(k, r, cutoff_tol)
        return cls(family, index, float(r), k, beta, modal_symbol(family, k, beta), classify(k, r))


def build_mode_catalog(section: CrossSection, k: complex, max_modes_per_family: int,
                       cutoff_tol: float = CUTOFF_TOL) -> list[Mode]:
    """TE modes from the Neumann spectrum, TM from Dirichlet, then TEM copies."""
    if max_modes_per_family < 1:
        raise DomainError("max_modes_per_family must be >= 1")
    k = check_wavenumber(k)
    catalog = []
    for family, bc in ((Family.TE, BoundaryFamily.NEUMANN), (Family.TM, BoundaryFamily.DIRICHLET)):
        spectrum = transverse_spectrum(section, bc, max_modes_per_family)
        for i, r in enumerate(spectrum.wavenumbers, start=1):
            try:
                catalog.append(Mode.build(family, k, r, index=i, cutoff_tol=cutoff_tol))
            except CutoffError as exc:
                log.warning("skipping %s mode %d: %s", family.value, i, exc)
    for i in range(1, min(tem_count(section), max_modes_per_family) + 1):
        catalog.append(Mode.build(Family.TEM, k, 0.0, index=i))
    return catalog
