"""Symbols of the transmission operator on a single modal trace.

Impedance acts as ``-i k`` on every mode. The truncated PML and the exact
DtN map act as ``-kappa * c`` with ``c = (1 + q)/(1 - q)`` and ``c = 1``.
"""

from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

from .errors import DomainError, PmlResonanceError
from .modal import Mode

RESONANCE_GUARD = 1e-12


class TransmissionKind(str, enum.Enum):
    IMPEDANCE = "impedance"
    PML = "pml"
    DTN = "dtn"


@dataclass(frozen=True)
class TransmissionSpec:
    kind: TransmissionKind = TransmissionKind.IMPEDANCE
    sigma: float | None = None
    length: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", TransmissionKind(self.kind))
        if self.kind is TransmissionKind.PML:
            if self.sigma is None or self.length is None or not (self.sigma > 0 and self.length > 0):
                raise DomainError(f"PML needs sigma > 0 and length > 0, got ({self.sigma}, {self.length})")
        elif self.sigma is not None or self.length is not None:
            raise DomainError(f"{self.kind.value} transmission takes no PML parameters")

    @classmethod
    def impedance(cls) -> "TransmissionSpec":
        return cls(TransmissionKind.IMPEDANCE)

    @classmethod
    def pml(cls, sigma: float, length: float) -> "TransmissionSpec":
        return cls(TransmissionKind.PML, float(sigma), float(length))

    @classmethod
    def dtn(cls) -> "TransmissionSpec":
        return cls(TransmissionKind.DTN)

    def label(self) -> str:
        if self.kind is TransmissionKind.PML:
            return f"pml(sigma={self.sigma:g},len={self.length:g})"
        return self.kind.value


@dataclass(frozen=True)
class TransmissionSymbol:
    lam: complex
    mode: Mode


def impedance_symbol(mode: Mode, k: complex | None = None) -> TransmissionSymbol:
    k = mode.k if k is None else complex(k)
    return TransmissionSymbol(-1j * k, mode)


def pml_reflection(beta: complex, sigma: float, length: float) -> complex:
    """``q = exp(2 i beta (1 + i sigma) length)``: round trip through the layer."""
    return cmath.exp(2j * beta * (1 + 1j * sigma) * length)


def pml_symbol(mode: Mode, sigma: float, length: float) -> TransmissionSymbol:
    """Symbol of a PML of stretch ``sigma`` and thickness ``length``."""
    if sigma < 0 or not length > 0:
        raise DomainError(f"PML needs sigma >= 0 and length > 0, got ({sigma}, {length})")
    q = pml_reflection(mode.beta, sigma, length)
    if abs(1 - q) <= RESONANCE_GUARD:
        raise PmlResonanceError(f"PML denominator vanishes for beta={mode.beta} (|1-q|={abs(1 - q):.3g})")
    return TransmissionSymbol(-mode.kappa * (1 + q) / (1 - q), mode)


def dtn_symbol(mode: Mode) -> TransmissionSymbol:
    # limit of the PML symbol as q -> 0
    return TransmissionSymbol(-mode.kappa, mode)


def transmission_symbol(spec: TransmissionSpec, mode: Mode) -> TransmissionSymbol:
    if spec.kind is TransmissionKind.IMPEDANCE:
        return impedance_symbol(mode)
    if spec.kind is TransmissionKind.PML:
        return pml_symbol(mode, spec.sigma, spec.length)
    return dtn_symbol(mode)
