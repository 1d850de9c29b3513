import math

import numpy as np
import pytest
import scipy.sparse.linalg as spla
import scipy.special

from wgschwarz.cross_section import (
    Annulus,
    BoundaryFamily,
    Disk,
    RasterMask,
    Rectangle,
    disk_spectrum,
    laplacian_matrix,
    load_mask,
    raster_spectrum,
    rasterize,
    rectangle_spectrum,
    tem_count,
    transverse_spectrum,
)
from wgschwarz.errors import DomainError

N, D = BoundaryFamily.NEUMANN, BoundaryFamily.DIRICHLET


def test_unit_square_values():
    te = rectangle_spectrum(1.0, 1.0, N, 3)
    assert te.wavenumbers == (math.pi, math.pi, math.pi * math.sqrt(2))
    assert te.labels == ((0, 1), (1, 0), (1, 1))
    tm = rectangle_spectrum(1.0, 1.0, D, 2)
    assert tm.wavenumbers == (math.pi * math.sqrt(2), math.pi * math.sqrt(5))


def test_rectangle_large_count_is_sorted_and_complete():
    spec = rectangle_spectrum(3.0, 0.5, D, 40)
    brute = sorted(math.pi * math.hypot(m / 3.0, n / 0.5) for m in range(1, 200) for n in range(1, 40))[:40]
    np.testing.assert_allclose(spec.wavenumbers, brute, rtol=0, atol=1e-13)


@pytest.mark.parametrize("family", [N, D])
def test_disk_against_scipy_zeros(family):
    spec = disk_spectrum(2.0, family, 12)
    zeros = scipy.special.jn_zeros if family is D else scipy.special.jnp_zeros
    ref = []
    for m in range(12):
        for z in zeros(m, 6):
            ref.extend([z / 2.0] * (1 if m == 0 else 2))
    np.testing.assert_allclose(spec.wavenumbers, sorted(ref)[:12], atol=1e-12)


def test_disk_multiplicity_labels():
    spec = disk_spectrum(1.0, D, 3)
    assert spec.labels == ((0, 1), (1, 1), (1, 1))


def test_raster_matches_sparse_oracle():
    mask = rasterize(Disk(1.0), 0.1)
    for family in (N, D):
        ours = raster_spectrum(mask, family, 5).wavenumbers
        A = laplacian_matrix(mask, family)
        ref = np.sort(spla.eigsh(A.tocsc(), k=7, sigma=-1.0, which="LM", return_eigenvectors=False))
        if family is N:
            ref = ref[1:]
        np.testing.assert_allclose(ours, np.sqrt(ref[:5]), rtol=1e-9)


@pytest.mark.parametrize("family,exact", [(D, math.pi * math.sqrt(5) / 2), (N, math.pi / 2)])
def test_raster_second_order(family, exact):
    errs = []
    for cells in (8, 16, 32):
        mask = rasterize(Rectangle(2.0, 1.0), 1.0 / cells)
        errs.append(abs(raster_spectrum(mask, family, 1).wavenumbers[0] ** 2 - exact**2))
    for coarse, fine in zip(errs, errs[1:]):
        assert 3.5 <= coarse / fine <= 4.5


def test_raster_symmetry_and_neumann_kernel():
    mask = rasterize(Disk(1.0), 0.25)
    A = laplacian_matrix(mask, N)
    assert abs(A - A.T).max() == 0
    np.testing.assert_allclose(A @ np.ones(mask.n_cells), 0, atol=1e-12)


def test_mask_validation():
    with pytest.raises(DomainError):
        RasterMask(0.1, np.zeros((3, 3)))
    with pytest.raises(DomainError):
        RasterMask(0.1, np.array([[1, 0], [0, 1]]))  # diagonal contact only
    with pytest.raises(DomainError):
        RasterMask(-1.0, np.ones((2, 2)))
    m = RasterMask(0.5, np.ones((2, 2)))
    with pytest.raises(ValueError):
        m.mask[0, 0] = False


def test_load_mask(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("h=0.25\n111\n101\n111\n")
    m = load_mask(p)
    assert m.h == 0.25 and m.n_cells == 8
    assert tem_count(m) == 1
    p.write_text("0.25\n11\n")
    with pytest.raises(DomainError):
        load_mask(p)
    p.write_text("h=0.25\n12\n")
    with pytest.raises(DomainError):
        load_mask(p)


def test_tem_counts():
    assert tem_count(Rectangle(1, 1)) == 0
    assert tem_count(Disk(1)) == 0
    assert tem_count(Annulus(0.5, 1.0)) == 1
    assert tem_count(rasterize(Annulus(0.3, 1.0), 0.05)) == 1
    two_holes = np.ones((5, 7), dtype=bool)
    two_holes[2, 2] = two_holes[2, 4] = False
    assert tem_count(RasterMask(0.1, two_holes)) == 2


def test_annulus_dispatch_close_to_bessel_cross_product():
    # TM ground state of the annulus: first root of J0(a x) Y0(b x) - J0(b x) Y0(a x)
    a, b = 0.5, 1.0
    f = lambda x: scipy.special.jv(0, a * x) * scipy.special.yv(0, b * x) - scipy.special.jv(0, b * x) * scipy.special.yv(0, a * x)
    from scipy.optimize import brentq

    exact = brentq(f, 4.0, 8.0)
    got = transverse_spectrum(Annulus(a, b), D, 1).wavenumbers[0]
    assert got == pytest.approx(exact, rel=0.02)


def test_bad_counts():
    with pytest.raises(DomainError):
        rectangle_spectrum(1, 1, D, 0)
    with pytest.raises(DomainError):
        raster_spectrum(RasterMask(0.5, np.ones((2, 2))), N, 4)
