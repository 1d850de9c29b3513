"""Per-mode Schwarz iteration: interface relations and the block Toeplitz matrix.

For one mode, the interface unknowns of subdomain ``l`` are the pair
``(R^-, R^+)``; the global vector is ordered ``(R^-_1, R^+_1, ..., R^-_N, R^+_N)``.
One sweep maps it through the 2N x 2N matrix with ``K^+ = [[0, 0], [a, b]]``
on the block super-diagonal and ``K^- = [[b, a], [0, 0]]`` on the block
sub-diagonal.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, SingularDenominatorError, SingularInterfaceError
from .modal import Mode
from .transmission import TransmissionKind, TransmissionSpec

DENOMINATOR_GUARD = 1e-13
OUTSIDE_THEOREM_TOL = 1e-13


@dataclass(frozen=True)
class DecompositionGeometry:
    """Chain of ``N`` overlapping subdomains ``[a_l, b_l]`` starting at 0."""

    L: float
    delta: float
    N: int

    def __post_init__(self):
        if not (self.L > 0 and self.delta > 0):
            raise DomainError(f"need L > 0 and delta > 0, got L={self.L}, delta={self.delta}")
        if self.N < 2:
            raise DomainError(f"need N >= 2 subdomains, got {self.N}")

    def left(self, l: int) -> float:
        return (l - 1) * (self.L + self.delta)

    def right(self, l: int) -> float:
        return self.left(l) + self.L + 2 * self.delta


class InterfaceMatrices(NamedTuple):
    lower: np.ndarray  # M^{l,l-1}
    upper: np.ndarray  # M^{l,l+1}
    diag: np.ndarray  # M^{l,l}


def _couplings(kappa: complex, lam: complex, beta: complex, left: float, right: float):
    p, m = kappa + lam, -kappa + lam
    lower = np.array([[p * cmath.exp(-1j * beta * left), m * cmath.exp(1j * beta * left)], [0, 0]])
    upper = np.array([[0, 0], [m * cmath.exp(-1j * beta * right), p * cmath.exp(1j * beta * right)]])
    return lower, upper


def interface_matrices(mode: Mode, lam: complex, geometry: DecompositionGeometry, l: int) -> InterfaceMatrices:
    """2x2 interface relations of subdomain ``l`` (1-based).

    ``M^{l,l}`` is always the full matrix; the outer couplings ``M^{1,0}`` and
    ``M^{N,N+1}`` are returned as zero.
    """
    if not 1 <= l <= geometry.N:
        raise DomainError(f"subdomain index {l} outside 1..{geometry.N}")
    lower, upper = _couplings(mode.kappa, lam, mode.beta, geometry.left(l), geometry.right(l))
    diag = lower + upper
    # evanescent exponentials make rows unbalanced; columns carry the true scale
    scale = min(np.prod(np.abs(diag).max(axis=1)), np.prod(np.abs(diag).max(axis=0)))
    if abs(np.linalg.det(diag)) < 1e-13 * scale:
        raise SingularInterfaceError(f"M^{{{l},{l}}} is singular for beta={mode.beta}, lambda={lam}")
    if l == 1:
        lower = np.zeros_like(lower)
    if l == geometry.N:
        upper = np.zeros_like(upper)
    return InterfaceMatrices(lower, upper, diag)


def _inv2(m: np.ndarray) -> np.ndarray:
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    return np.array([[m[1, 1], -m[0, 1]], [-m[1, 0], m[0, 0]]]) / det


def compact_from_interfaces(mode: Mode, lam: complex, geometry: DecompositionGeometry, l: int):
    """``(K^-, K^+)`` as ``M^{l,l-1} [M^{l-1,l-1}]^-1`` and ``M^{l,l+1} [M^{l+1,l+1}]^-1``.

    Needs an interior index ``1 < l < N``.
    """
    if not 1 < l < geometry.N:
        raise DomainError(f"need an interior subdomain, got l={l} with N={geometry.N}")
    here = interface_matrices(mode, lam, geometry, l)
    before = interface_matrices(mode, lam, geometry, l - 1)
    after = interface_matrices(mode, lam, geometry, l + 1)
    return here.lower @ _inv2(before.diag), here.upper @ _inv2(after.diag)


@dataclass(frozen=True)
class SchwarzBlock:
    a: complex
    b: complex
    mode: Mode | None
    lam: complex
    L: float
    delta: float

    @property
    def outside_theorem(self) -> bool:
        """True when ``a`` or ``b`` vanishes and the limit formula is not guaranteed."""
        return abs(self.a) <= OUTSIDE_THEOREM_TOL * abs(self.b) or abs(self.b) <= OUTSIDE_THEOREM_TOL * abs(self.a)

    @property
    def k_plus(self) -> np.ndarray:
        return np.array([[0, 0], [self.a, self.b]], dtype=complex)

    @property
    def k_minus(self) -> np.ndarray:
        return np.array([[self.b, self.a], [0, 0]], dtype=complex)


def block_coefficients(kappa: complex, lam: complex, beta: complex, L: float, delta: float) -> tuple[complex, complex]:
    """Closed-form ``(a, b)`` of the compact iteration.

    Numerator and denominator are multiplied by ``exp(i beta (L + 2 delta))``
    so that only decaying exponentials appear (``Im beta >= 0``).
    """
    p2 = (kappa + lam) ** 2
    m2 = (lam - kappa) ** 2
    e = lambda x: cmath.exp(1j * beta * x)
    den = p2 * e(2 * (L + 2 * delta)) - m2
    scale = max(abs(p2) * abs(e(2 * (L + 2 * delta))), abs(m2))
    if abs(den) <= DENOMINATOR_GUARD * scale or scale == 0:
        raise SingularDenominatorError(f"Schwarz block denominator vanishes (beta={beta}, lambda={lam}, kappa={kappa})")
    a = (lam * lam - kappa * kappa) * (e(2 * L + 3 * delta) - e(delta)) / den
    b = (p2 * e(L + 3 * delta) - m2 * e(L + delta)) / den
    return a, b


def schwarz_block(mode: Mode, lam: complex, L: float, delta: float) -> SchwarzBlock:
    if not (L > 0 and delta > 0):
        raise DomainError(f"need L > 0 and delta > 0, got L={L}, delta={delta}")
    a, b = block_coefficients(mode.kappa, lam, mode.beta, L, delta)
    return SchwarzBlock(a, b, mode, complex(lam), float(L), float(delta))


def limiting_radius(block: SchwarzBlock) -> float:
    """``max(|a + b|, |a - b|)``; check ``block.outside_theorem`` before trusting it."""
    return max(abs(block.a + block.b), abs(block.a - block.b))


class DictionaryReport(NamedTuple):
    a_relation_residual: float
    b_relation_residual: float
    limiting_difference: float


def dictionary_check(block_te: SchwarzBlock, block_tm: SchwarzBlock, spec: TransmissionSpec) -> DictionaryReport:
    """Residuals of the TE/TM relations between matched blocks.

    Impedance flips the sign of ``a``; PML and DtN keep it.
    """
    for blk in (block_te, block_tm):
        if blk.mode is None:
            raise DomainError("dictionary check needs blocks built from modes")
    te, tm = block_te.mode, block_tm.mode
    if abs(te.beta - tm.beta) > 1e-14 * max(1.0, abs(te.beta)) or te.k != tm.k:
        raise DomainError(f"blocks do not share (beta, k): {te.beta}/{tm.beta}, {te.k}/{tm.k}")
    if (block_te.L, block_te.delta) != (block_tm.L, block_tm.delta):
        raise DomainError("blocks do not share the geometry")
    sign = -1.0 if spec.kind is TransmissionKind.IMPEDANCE else 1.0
    return DictionaryReport(
        abs(block_te.a - sign * block_tm.a),
        abs(block_te.b - block_tm.b),
        abs(limiting_radius(block_te) - limiting_radius(block_tm)),
    )


class BlockToeplitzOperator:
    """The 2N x 2N Schwarz iteration matrix of one mode, applied matrix-free."""

    def __init__(self, block: SchwarzBlock, N: int):
        if N < 2:
            raise DomainError(f"need N >= 2 subdomains, got {N}")
        self.block = block
        self.N = int(N)

    @classmethod
    def from_coefficients(cls, a: complex, b: complex, N: int) -> "BlockToeplitzOperator":
        return cls(SchwarzBlock(complex(a), complex(b), None, 0j, 1.0, 1.0), N)

    @property
    def shape(self) -> tuple[int, int]:
        return (2 * self.N, 2 * self.N)

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        if x.shape[0] != 2 * self.N:
            raise DomainError(f"vector length {x.shape[0]} does not match 2N = {2 * self.N}")
        a, b = self.block.a, self.block.b
        X = x.reshape((self.N, 2) + x.shape[1:])
        Y = np.zeros(X.shape, dtype=np.result_type(x.dtype, complex))
        Y[1:, 0] = b * X[:-1, 0] + a * X[:-1, 1]
        Y[:-1, 1] = a * X[1:, 0] + b * X[1:, 1]
        return Y.reshape(x.shape)

    __matmul__ = apply

    def assemble(self) -> np.ndarray:
        n = 2 * self.N
        A = np.zeros((n, n), dtype=complex)
        for l in range(self.N - 1):
            A[2 * l:2 * l + 2, 2 * l + 2:2 * l + 4] = self.block.k_plus
            A[2 * l + 2:2 * l + 4, 2 * l:2 * l + 2] = self.block.k_minus
        return A

    def __repr__(self):
        return f"BlockToeplitzOperator(a={self.block.a:.6g}, b={self.block.b:.6g}, N={self.N})"


def assemble(operator: BlockToeplitzOperator) -> np.ndarray:
    return operator.assemble()


def apply(operator: BlockToeplitzOperator, x: np.ndarray) -> np.ndarray:
    return operator.apply(x)


def nilpotency_degree(operator: BlockToeplitzOperator, tol: float = 1e-12) -> int | None:
    """Smallest ``p <= 2N`` with ``||I^p|| <= tol ||I||^p`` (infinity norms), else None."""
    A = operator.assemble()
    norm = np.abs(A).sum(axis=1).max()
    if norm == 0:
        return 1
    P = A.copy()
    for p in range(1, 2 * operator.N + 1):
        if np.abs(P).sum(axis=1).max() <= tol * norm**p:
            return p
        P = P @ A
    return None
