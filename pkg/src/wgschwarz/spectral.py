"""Dense eigenvalues, spectral radii and iterative drivers for the Schwarz operators."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import kernels
from .errors import DomainError, NumericError, ResourceError
from .schwarz import BlockToeplitzOperator

DENSE_CAP = 2000
GMRES_MAX_ITERS = 2000


class Method(str, enum.Enum):
    DENSE_QR = "dense_qr"
    POWER_ITERATION = "power_iteration"


@dataclass(frozen=True)
class SpectrumResult:
    eigenvalues: np.ndarray
    spectral_radius: float
    method: Method = Method.DENSE_QR


@dataclass
class IterationTrace:
    """Relative residual history; entry 0 is the starting residual (1.0)."""

    iterations: int
    residual_history: list[float]
    converged: bool
    tolerance: float
    diverged: bool = False
    seed: int | None = field(default=None, compare=False)

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1]

    def asymptotic_rate(self, tail: int = 20) -> float:
        """Geometric-mean contraction over the last ``tail`` steps (rounded down to even).

        The Schwarz spectra are symmetric under negation, so an even window
        averages out the +/- pair oscillation.
        """
        h = [v for v in self.residual_history if v > 0]
        steps = min(tail, len(h) - 1)
        steps -= steps % 2
        if steps <= 0:
            return 0.0
        return (h[-1] / h[-1 - steps]) ** (1.0 / steps)


def _isolate(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split off eigenvalues exposed by a symmetric permutation.

    Rows (columns) whose off-diagonal part vanishes within the active index
    set are peeled repeatedly, leaving a block triangular form. Returns the
    isolated diagonal entries and the indices of the remaining middle block.
    """
    n = A.shape[0]
    nz = A != 0
    np.fill_diagonal(nz, False)
    active = np.ones(n, dtype=bool)
    isolated = []
    while active.any():
        idx = np.flatnonzero(active)
        sub = nz[np.ix_(idx, idx)]
        peel = idx[~sub.any(axis=1) | ~sub.any(axis=0)]
        if peel.size == 0:
            break
        isolated.extend(peel.tolist())
        active[peel] = False
    return A[isolated, isolated], np.flatnonzero(active)


def _scale(B: np.ndarray) -> np.ndarray:
    """Diagonal similarity with powers of two equalising row and column norms."""
    B = B.copy()
    m = B.shape[0]
    absB = np.abs(B)
    np.fill_diagonal(absB, 0.0)
    for _ in range(100):
        done = True
        for i in range(m):
            c = absB[:, i].sum()
            r = absB[i, :].sum()
            if c == 0.0 or r == 0.0:
                continue
            s = c + r
            f = 1.0
            while c < r / 2.0:
                f *= 2.0
                c *= 4.0
            while c >= 2.0 * r:
                f /= 2.0
                c /= 4.0
            if (c + r) / f < 0.95 * s:
                done = False
                B[i, :] /= f
                B[:, i] *= f
                absB[i, :] /= f
                absB[:, i] *= f
        if done:
            break
    return B


def eigenvalues_dense(matrix: np.ndarray, balance: bool = True, backend: str | None = None) -> SpectrumResult:
    """All eigenvalues by Hessenberg reduction and shifted QR.

    ``balance`` first peels eigenvalues exposed by permutation (this makes
    nilpotent chains exact) and rescales the rest. ``backend`` overrides
    the import-time kernel choice (``"python"`` or ``"cython"``).
    """
    A = np.asarray(matrix, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DomainError(f"need a nonempty square matrix, got shape {A.shape}")
    if not np.isfinite(A).all():
        raise DomainError("matrix has non-finite entries")
    if backend is None:
        hessenberg, hqr = kernels.hessenberg, kernels.hqr_eigvals
    else:
        hessenberg, hqr = kernels.backend_kernels(backend)
    if balance:
        isolated, middle = _isolate(A)
        B = _scale(A[np.ix_(middle, middle)]) if middle.size else A[:0, :0]
    else:
        isolated, B = np.zeros(0, dtype=complex), A
    try:
        rest = hqr(hessenberg(B)) if B.shape[0] else np.zeros(0, dtype=complex)
    except RuntimeError as exc:
        raise NumericError(str(exc)) from exc
    eig = np.concatenate([np.asarray(isolated, dtype=complex), rest])
    return SpectrumResult(eig, float(np.abs(eig).max()), Method.DENSE_QR)


def spectral_radius(operator: BlockToeplitzOperator, cap: int = DENSE_CAP) -> float:
    if 2 * operator.N > cap:
        raise ResourceError(
            f"2N = {2 * operator.N} exceeds the dense cap {cap}; use power_iteration on the matrix-free operator"
        )
    return eigenvalues_dense(operator.assemble()).spectral_radius


class PowerResult(NamedTuple):
    estimate: float
    converged: bool
    iterations: int


def power_iteration(operator, max_iters: int = 5000, tol: float = 1e-10, seed: int = 0) -> PowerResult:
    """Spectral radius estimate from repeated application.

    ``converged`` is False when the iterate never settles on an eigenvector,
    which happens when several eigenvalues share the dominant modulus.
    """
    apply = operator.apply if hasattr(operator, "apply") else (lambda v: operator @ v)
    n = operator.shape[0]
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    x /= np.linalg.norm(x)
    ratios = []
    for it in range(1, max_iters + 1):
        y = apply(x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return PowerResult(0.0, True, it)
        mu = np.vdot(x, y)
        if np.linalg.norm(y - mu * x) <= tol * ny:
            return PowerResult(float(abs(mu)), True, it)
        ratios.append(ny)
        x = y / ny
    tail = np.log(ratios[-20:])
    return PowerResult(float(np.exp(tail.mean())), False, max_iters)


def shifted_identity(operator: BlockToeplitzOperator) -> Callable[[np.ndarray], np.ndarray]:
    """The map ``x -> (Id - I) x`` whose solve is the accelerated Schwarz iteration."""
    return lambda x: x - operator.apply(x)


def _back_substitute(H: np.ndarray, g: np.ndarray) -> np.ndarray:
    k = g.shape[0]
    y = np.zeros(k, dtype=complex)
    for i in range(k - 1, -1, -1):
        y[i] = (g[i] - H[i, i + 1:k] @ y[i + 1:]) / H[i, i]
    return y


def gmres_solve(operator_apply: Callable[[np.ndarray], np.ndarray], rhs: np.ndarray, tol: float = 1e-5,
                restart: int | None = None, max_iters: int = GMRES_MAX_ITERS):
    """GMRES from a zero initial guess with Givens-rotated Arnoldi.

    Iterations count operator applications. Without convergence within
    ``max_iters`` the trace reports ``converged=False`` (tables print DNC).
    Returns ``(x, trace)``.
    """
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    b = np.asarray(rhs, dtype=complex)
    if not np.isfinite(b).all():
        raise DomainError("right-hand side has non-finite entries")
    n = b.shape[0]
    x = np.zeros(n, dtype=complex)
    bnorm = np.linalg.norm(b)
    history = [1.0]
    if bnorm == 0.0:
        return x, IterationTrace(0, history, True, tol)
    m = restart if restart else max_iters
    total = 0
    while total < max_iters:
        r = b - operator_apply(x)
        beta = np.linalg.norm(r)
        if beta <= tol * bnorm:
            history[-1] = beta / bnorm
            return x, IterationTrace(total, history, True, tol)
        dim = min(m, max_iters - total, n)
        V = np.zeros((dim + 1, n), dtype=complex)
        H = np.zeros((dim + 1, dim), dtype=complex)
        cs = np.zeros(dim)
        sn = np.zeros(dim, dtype=complex)
        g = np.zeros(dim + 1, dtype=complex)
        g[0] = beta
        V[0] = r / beta
        k = 0
        done = False
        for j in range(dim):
            w = operator_apply(V[j])
            total += 1
            for _ in range(2):  # classical Gram-Schmidt with one reorthogonalisation
                h = V[: j + 1].conj() @ w
                w = w - h @ V[: j + 1]
                H[: j + 1, j] += h
            hn = np.linalg.norm(w)
            H[j + 1, j] = hn
            col_norm = np.linalg.norm(H[: j + 2, j])
            for i in range(j):
                t = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
                H[i + 1, j] = -np.conj(sn[i]) * H[i, j] + cs[i] * H[i + 1, j]
                H[i, j] = t
            hjj, hj1 = H[j, j], H[j + 1, j]
            rho = math.hypot(abs(hjj), abs(hj1))
            if abs(hjj) == 0.0:
                cs[j], sn[j] = 0.0, 1.0
            else:
                cs[j] = abs(hjj) / rho
                sn[j] = (hjj / abs(hjj)) * np.conj(hj1) / rho
            H[j, j] = cs[j] * hjj + sn[j] * hj1
            H[j + 1, j] = 0.0
            g[j + 1] = -np.conj(sn[j]) * g[j]
            g[j] = cs[j] * g[j]
            res = abs(g[j + 1]) / bnorm
            history.append(res)
            k = j + 1
            breakdown = hn <= 1e-14 * col_norm
            if res <= tol or breakdown:
                done = True
                break
            V[j + 1] = w / hn
        x = x + _back_substitute(H[:k, :k], g[:k]) @ V[:k]
        if done:
            true_res = np.linalg.norm(b - operator_apply(x)) / bnorm
            if true_res <= tol or history[-1] <= tol:
                return x, IterationTrace(total, history, True, tol)
            if total < max_iters and k < n:
                raise NumericError(f"GMRES breakdown at iteration {total} with residual {true_res:.3e}")
    return x, IterationTrace(total, history, False, tol)


def fixed_point_run(operator: BlockToeplitzOperator, initial: np.ndarray, tol: float = 1e-12,
                    max_iters: int = GMRES_MAX_ITERS, divergence: float = 1e8) -> IterationTrace:
    """Plain Schwarz sweeps ``x <- I x`` with relative infinity-norm history.

    Stops as converged below ``tol``, or as diverged above ``divergence``.
    """
    x = np.asarray(initial, dtype=complex)
    n0 = np.abs(x).max()
    if n0 == 0.0:
        return IterationTrace(0, [0.0], True, tol)
    history = [1.0]
    for it in range(1, max_iters + 1):
        x = operator.apply(x)
        rel = float(np.abs(x).max() / n0)
        history.append(rel)
        if rel <= tol:
            return IterationTrace(it, history, True, tol)
        if not math.isfinite(rel) or rel > divergence:
            return IterationTrace(it, history, False, tol, diverged=True)
    return IterationTrace(max_iters, history, False, tol)
