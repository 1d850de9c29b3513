"""Pure-Python eigenvalue kernel (numpy row/column updates).

Mirrors ``_kernels.pyx`` operation for operation; used when the compiled
extension is unavailable or ``WGSCHWARZ_PURE_PYTHON=1`` is set.
"""

from __future__ import annotations

import cmath

import numpy as np

EPS = np.finfo(float).eps


def hessenberg(A: np.ndarray) -> np.ndarray:
    """Upper Hessenberg form of ``A`` by Householder similarity (returns a copy)."""
    H = np.array(A, dtype=complex, order="C")
    n = H.shape[0]
    for j in range(n - 2):
        x = H[j + 1:, j]
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        alpha = np.linalg.norm(x)
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[j + 1:, j:] -= 2.0 * np.outer(v, v.conj() @ H[j + 1:, j:])
        H[:, j + 1:] -= 2.0 * np.outer(H[:, j + 1:] @ v, v.conj())
        H[j + 2:, j] = 0.0
    return H


def _abs1(z: complex) -> float:
    return abs(z.real) + abs(z.imag)


def _eig2(a: complex, b: complex, c: complex, d: complex) -> tuple[complex, complex]:
    half = 0.5 * (a + d)
    disc = cmath.sqrt(0.25 * (a - d) ** 2 + b * c)
    e1 = half + disc if abs(half + disc) >= abs(half - disc) else half - disc
    det = a * d - b * c
    e2 = det / e1 if e1 != 0 else half - disc
    return e1, e2


def hqr_eigvals(H: np.ndarray, max_sweeps_per_eig: int = 30) -> np.ndarray:
    """Eigenvalues of an upper Hessenberg matrix by shifted QR with deflation.

    Works in place on ``H``. Raises RuntimeError when the sweep budget
    (``max_sweeps_per_eig * n``) is exhausted.
    """
    n = H.shape[0]
    eig = np.zeros(n, dtype=complex)
    hi = n - 1
    its = 0
    total = 0
    budget = max_sweeps_per_eig * max(n, 10)
    while hi >= 0:
        if hi == 0:
            eig[0] = H[0, 0]
            break
        l = hi
        while l > 0:
            s = _abs1(H[l - 1, l - 1]) + _abs1(H[l, l])
            if s == 0.0:
                s = np.abs(H[: hi + 1, : hi + 1]).sum() / (hi + 1)
            if _abs1(H[l, l - 1]) <= EPS * s:
                H[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            eig[hi] = H[hi, hi]
            hi -= 1
            its = 0
            continue
        if l == hi - 1:
            eig[hi - 1], eig[hi] = _eig2(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
            hi -= 2
            its = 0
            continue
        total += 1
        its += 1
        if total > budget:
            raise RuntimeError(f"QR iteration did not converge ({hi + 1} eigenvalues left)")
        if its % 10 == 0:
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1].real) + 0.75j * abs(H[hi - 1, hi - 2])
        else:
            e1, e2 = _eig2(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
            mu = e1 if abs(e1 - H[hi, hi]) < abs(e2 - H[hi, hi]) else e2
        _qr_step(H, l, hi, mu)
    return eig


def _qr_step(H: np.ndarray, l: int, hi: int, mu: complex) -> None:
    idx = np.arange(l, hi + 1)
    H[idx, idx] -= mu
    cs = []
    for j in range(l, hi):
        x, y = H[j, j], H[j + 1, j]
        ax = abs(x)
        r = float(np.hypot(ax, abs(y)))
        if r == 0.0:
            c, s = 1.0, 0.0
        elif ax == 0.0:
            c, s = 0.0, 1.0 + 0.0j
        else:
            c = ax / r
            s = (x / ax) * y.conjugate() / r
        rows = H[j:j + 2, j:hi + 1]
        top = c * rows[0] + s * rows[1]
        bot = -s.conjugate() * rows[0] + c * rows[1]
        rows[0], rows[1] = top, bot
        H[j + 1, j] = 0.0
        cs.append((c, s))
    for j, (c, s) in zip(range(l, hi), cs):
        stop = min(j + 2, hi) + 1
        cols = H[l:stop, j:j + 2]
        left = cols[:, 0] * c + cols[:, 1] * s.conjugate()
        right = -cols[:, 0] * s + cols[:, 1] * c
        cols[:, 0], cols[:, 1] = left, right
    H[idx, idx] += mu


def eigvals(A: np.ndarray) -> np.ndarray:
    return hqr_eigvals(hessenberg(A))
