"""Integer-order Bessel functions of the first kind and their zeros.

Only what the disk cross-section needs: J_m, J_m' and their positive zeros,
all for real arguments and integer m >= 0.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NumericError

SERIES_LIMIT = 4.0  # series cancellation grows like exp(x)
_SCAN_STEP = 0.1


def _jv_series(m: int, x: float) -> float:
    half = 0.5 * x
    term = half**m / math.factorial(m)
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + m))
        total += term
        if abs(term) <= 1e-17 * max(abs(total), 1e-300) and k > 2:
            break
        if k > 200:
            break
    return total


def _jv_integral(m: int, x: float) -> float:
    # J_m(x) = (1/2pi) int_0^{2pi} cos(m t - x sin t) dt; the integrand is
    # periodic and entire, so the trapezoid rule converges geometrically.
    n = int(x + m) + 64
    t = np.arange(n) * (2.0 * math.pi / n)
    return float(np.mean(np.cos(m * t - x * np.sin(t))))


def jv(m: int, x: float) -> float:
    """J_m(x) for integer ``m >= 0`` and real ``x``."""
    if m < 0:
        raise ValueError("order must be nonnegative")
    if x < 0:
        return (-1) ** m * jv(m, -x)
    if x <= SERIES_LIMIT:
        return _jv_series(m, x)
    return _jv_integral(m, x)


def jvp(m: int, x: float) -> float:
    """First derivative J_m'(x)."""
    if m == 0:
        return -jv(1, x)
    return 0.5 * (jv(m - 1, x) - jv(m + 1, x))


def _jvpp(m: int, x: float) -> float:
    # Bessel's equation: x^2 J'' + x J' + (x^2 - m^2) J = 0
    return -jvp(m, x) / x - (1.0 - (m * m) / (x * x)) * jv(m, x)


def _refine(f, df, lo: float, hi: float, flo: float) -> float:
    """Newton iteration safeguarded by a sign-change bracket."""
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi = x
        d = df(x)
        step = fx / d if d != 0.0 else math.inf
        cand = x - step
        if not (lo < cand < hi):
            cand = 0.5 * (lo + hi)
        if abs(cand - x) <= 4e-16 * abs(x) or hi - lo <= 4e-16 * abs(x):
            return cand
        x = cand
    raise NumericError(f"Bessel zero refinement did not converge in bracket [{lo!r}, {hi!r}]")


def _zeros_below(f, df, start: float, limit: float) -> list[float]:
    roots = []
    a = start
    fa = f(a)
    while a < limit:
        b = min(a + _SCAN_STEP, limit)
        fb = f(b)
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0.0:
            roots.append(_refine(f, df, a, b, fa))
        a, fa = b, fb
    return roots


def jn_zeros_below(m: int, limit: float) -> list[float]:
    """All positive zeros of J_m smaller than ``limit``, ascending."""
    # no zeros of J_m below m for m >= 1
    start = max(float(m), 1e-3)
    return _zeros_below(lambda x: jv(m, x), lambda x: jvp(m, x), start, limit)


def jnp_zeros_below(m: int, limit: float) -> list[float]:
    """All positive zeros of J_m' smaller than ``limit`` (x = 0 excluded)."""
    # j'_{m,1} >= m for m >= 1; J_0' = -J_1 has its first positive zero near 3.83
    start = max(float(m) - 0.5, 1e-3) if m > 0 else 1e-3
    return _zeros_below(lambda x: jvp(m, x), lambda x: _jvpp(m, x), start, limit)
