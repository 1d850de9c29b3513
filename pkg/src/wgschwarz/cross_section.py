"""Transverse eigen-data of the waveguide section.

Every spectrum is reported as transverse wavenumbers ``r`` (the Laplacian
eigenvalue is ``r**2``) so that downstream code uses ``beta = sqrt(k^2 - r^2)``.
The Neumann list never contains the constant mode ``r = 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy import ndimage

from . import bessel
from .errors import DomainError, NumericError


class BoundaryFamily(str, enum.Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class Rectangle:
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise DomainError(f"rectangle dimensions must be positive, got {self.width}x{self.height}")


@dataclass(frozen=True)
class Disk:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError(f"disk radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class Annulus:
    inner: float
    outer: float

    def __post_init__(self):
        if not (0 < self.inner < self.outer):
            raise DomainError(f"annulus needs 0 < inner < outer, got ({self.inner}, {self.outer})")


@dataclass(frozen=True, eq=False)
class RasterMask:
    """Union of the ``h x h`` cells flagged in ``mask`` (rows run along y)."""

    h: float
    mask: np.ndarray = field(repr=False)

    def __post_init__(self):
        mask = np.asarray(self.mask, dtype=bool)
        if mask.ndim != 2:
            raise DomainError("raster mask must be two-dimensional")
        if not self.h > 0:
            raise DomainError(f"grid spacing must be positive, got {self.h}")
        if not mask.any():
            raise DomainError("raster mask has no interior cell")
        _, ncomp = ndimage.label(mask)
        if ncomp != 1:
            raise DomainError(f"raster mask must be 4-connected, found {ncomp} components")
        mask = mask.copy()
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)

    @property
    def n_cells(self) -> int:
        return int(self.mask.sum())


CrossSection = Union[Rectangle, Disk, Annulus, RasterMask]


@dataclass(frozen=True)
class TransverseSpectrum:
    family: BoundaryFamily
    wavenumbers: tuple[float, ...]
    labels: tuple[tuple[int, ...], ...] = ()

    def __len__(self):
        return len(self.wavenumbers)


def _check_count(count: int) -> None:
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")


def rectangle_spectrum(width: float, height: float, family: BoundaryFamily, count: int) -> TransverseSpectrum:
    """First ``count`` wavenumbers ``pi*sqrt((m/width)^2 + (n/height)^2)``."""
    Rectangle(width, height)
    _check_count(count)
    family = BoundaryFamily(family)
    start = 0 if family is BoundaryFamily.NEUMANN else 1
    extent = count + 1
    while True:
        pairs = [
            (m, n)
            for m in range(start, start + extent)
            for n in range(start, start + extent)
            if (m, n) != (0, 0)
        ]
        vals = sorted((math.pi * math.hypot(m / width, n / height), m, n) for m, n in pairs)
        vals = vals[:count]
        # every omitted pair has m or n >= start + extent, hence a value above this bound
        bound = math.pi * (start + extent) / max(width, height)
        if vals[-1][0] < bound:
            break
        extent *= 2
    return TransverseSpectrum(family, tuple(v for v, _, _ in vals), tuple((m, n) for _, m, n in vals))


def disk_spectrum(radius: float, family: BoundaryFamily, count: int) -> TransverseSpectrum:
    """Zeros of J_m (Dirichlet) or J_m' (Neumann) scaled by ``1/radius``.

    Azimuthal orders ``m >= 1`` carry the cos/sin pair and are listed twice.
    """
    Disk(radius)
    _check_count(count)
    family = BoundaryFamily(family)
    finder = bessel.jn_zeros_below if family is BoundaryFamily.DIRICHLET else bessel.jnp_zeros_below
    limit = 4.0 + 2.0 * math.sqrt(count)
    while True:
        found = []
        m = 0
        while m < limit:
            for n, z in enumerate(finder(m, limit), start=1):
                found.extend([(z, m, n)] * (1 if m == 0 else 2))
            m += 1
        if len(found) >= count:
            break
        limit *= 1.5
    found.sort(key=lambda t: (t[0], t[1], t[2]))
    found = found[:count]
    return TransverseSpectrum(family, tuple(z / radius for z, _, _ in found), tuple((m, n) for _, m, n in found))


def laplacian_matrix(section: RasterMask, family: BoundaryFamily) -> sp.csr_matrix:
    """5-point negative Laplacian on the flagged cells.

    Ghost values across the section boundary mirror the interior value:
    with a sign flip for Dirichlet (zero on the cell face) and without for
    Neumann (zero flux through the face). Both are second order.
    """
    family = BoundaryFamily(family)
    mask = section.mask
    ny, nx = mask.shape
    index = -np.ones(mask.shape, dtype=np.int64)
    index[mask] = np.arange(section.n_cells)
    padded = np.pad(mask, 1)
    iy, ix = np.nonzero(mask)
    sign = 1.0 if family is BoundaryFamily.DIRICHLET else -1.0
    rows, cols, vals = [], [], []
    diag = np.full(iy.size, 4.0)
    me = index[iy, ix]
    for dy, dx in ((-1, 0), (1, 0), (0, -1), (0, 1)):
        inside = padded[iy + 1 + dy, ix + 1 + dx]
        diag[~inside] += sign
        src = me[inside]
        dst = index[iy[inside] + dy, ix[inside] + dx]
        rows.append(src)
        cols.append(dst)
        vals.append(np.full(src.size, -1.0))
    rows.append(me)
    cols.append(me)
    vals.append(diag)
    n = section.n_cells
    mat = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)
    )
    return mat / section.h**2


def _smallest_eigenvalues(A: sp.spmatrix, nev: int, shift: float, tol: float = 1e-11, max_iter: int = 2000):
    """Block inverse iteration about ``shift`` with Rayleigh-Ritz.

    Converged leading Ritz vectors are locked so later sweeps only refine
    the remaining ones.
    """
    n = A.shape[0]
    if nev >= n:
        vals = scipy.linalg.eigvalsh(A.toarray())
        return vals[:nev]
    p = min(n, nev + max(6, nev // 2))
    lu = spla.splu((A - shift * sp.identity(n, format="csc")).tocsc())
    rng = np.random.default_rng(20240611)
    X, _ = np.linalg.qr(rng.standard_normal((n, p)))
    locked = 0
    for _ in range(max_iter):
        Y = lu.solve(X)
        if locked:
            Y[:, :locked] = X[:, :locked]
        Q, _ = np.linalg.qr(Y)
        T = Q.T @ (A @ Q)
        w, V = np.linalg.eigh(0.5 * (T + T.T))
        X = Q @ V
        R = A @ X[:, :nev] - X[:, :nev] * w[:nev]
        res = np.linalg.norm(R, axis=0)
        scale = np.maximum(np.abs(w[:nev]), abs(shift))
        ok = res <= tol * scale
        locked = nev if ok.all() else int(np.argmin(ok))
        if ok.all():
            return w[:nev]
    raise NumericError(f"inverse iteration stagnated: residuals {res.tolist()}")


def raster_spectrum(section: RasterMask, family: BoundaryFamily, count: int) -> TransverseSpectrum:
    """Finite-difference transverse wavenumbers of a raster section."""
    _check_count(count)
    family = BoundaryFamily(family)
    neumann = family is BoundaryFamily.NEUMANN
    nev = count + 1 if neumann else count
    if nev > section.n_cells:
        raise DomainError(f"asked for {count} eigenvalues of a mask with {section.n_cells} cells")
    A = laplacian_matrix(section, family)
    extent = section.h * max(section.mask.shape)
    mu = _smallest_eigenvalues(A, nev, shift=-1.0 / extent**2)
    if neumann:
        if abs(mu[0]) > 1e-8 * abs(mu[1]):
            raise NumericError(f"Neumann constant mode not found (smallest eigenvalue {mu[0]!r})")
        mu = mu[1:]
    mu = np.clip(mu, 0.0, None)
    return TransverseSpectrum(family, tuple(float(v) for v in np.sqrt(mu)))


def rasterize(section: CrossSection, h: float) -> RasterMask:
    """Cells of an ``h`` grid whose centres lie inside ``section``."""
    if isinstance(section, RasterMask):
        return section
    if isinstance(section, Rectangle):
        nx = max(1, round(section.width / h))
        ny = max(1, round(section.height / h))
        return RasterMask(h, np.ones((ny, nx), dtype=bool))
    outer = section.radius if isinstance(section, Disk) else section.outer
    inner = section.inner if isinstance(section, Annulus) else 0.0
    n = int(math.ceil(2 * outer / h))
    c = (np.arange(n) + 0.5) * h - 0.5 * n * h
    rr = np.hypot(*np.meshgrid(c, c))
    return RasterMask(h, (rr < outer) & (rr >= inner))


def load_mask(path: str | Path) -> RasterMask:
    """Read a mask file: ``h=<float>`` then rows of ``0``/``1`` characters."""
    lines = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("h="):
        raise DomainError(f"{path}: first line must be 'h=<float>'")
    try:
        h = float(lines[0][2:])
    except ValueError as exc:
        raise DomainError(f"{path}: bad grid spacing {lines[0]!r}") from exc
    rows = lines[1:]
    if not rows or any(set(r) - {"0", "1"} for r in rows) or len({len(r) for r in rows}) != 1:
        raise DomainError(f"{path}: mask rows must be equal-length strings of 0/1")
    return RasterMask(h, np.array([[c == "1" for c in r] for r in rows], dtype=bool))


def tem_count(section: CrossSection) -> int:
    """Number of TEM modes: boundary components of the section minus one."""
    if isinstance(section, (Rectangle, Disk)):
        return 0
    if isinstance(section, Annulus):
        return 1
    # background is 8-connected when the foreground is 4-connected
    background = ~np.pad(section.mask, 1)
    _, ncomp = ndimage.label(background, structure=np.ones((3, 3), dtype=int))
    return ncomp - 1


ANNULUS_RASTER_CELLS = 96


def transverse_spectrum(section: CrossSection, family: BoundaryFamily, count: int) -> TransverseSpectrum:
    """Dispatch to the analytic or raster solver for ``section``."""
    if isinstance(section, Rectangle):
        return rectangle_spectrum(section.width, section.height, family, count)
    if isinstance(section, Disk):
        return disk_spectrum(section.radius, family, count)
    if isinstance(section, Annulus):
        section = rasterize(section, 2 * section.outer / ANNULUS_RASTER_CELLS)
    return raster_spectrum(section, family, count)
