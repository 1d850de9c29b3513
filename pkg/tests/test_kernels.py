import os
import subprocess
import sys

import numpy as np
import pytest

from wgschwarz import _kernels_py, kernels


def test_hessenberg_is_similarity():
    rng = np.random.default_rng(2)
    A = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    for hess, _ in [kernels.backend_kernels(b) for b in ("python", kernels.BACKEND)]:
        H = hess(A)
        assert np.abs(np.tril(H, -2)).max() == 0
        assert np.trace(H) == pytest.approx(np.trace(A))
        assert np.linalg.norm(H) == pytest.approx(np.linalg.norm(A))


def test_budget_exhaustion_raises():
    H = _kernels_py.hessenberg(np.random.default_rng(0).standard_normal((6, 6)))
    with pytest.raises(RuntimeError):
        _kernels_py.hqr_eigvals(H.copy(), max_sweeps_per_eig=0)


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernel not built")
def test_backends_agree():
    rng = np.random.default_rng(3)
    A = rng.standard_normal((40, 40)) + 1j * rng.standard_normal((40, 40))
    py = np.sort_complex(_kernels_py.eigvals(A))
    hess, hqr = kernels.backend_kernels("cython")
    cy = np.sort_complex(hqr(hess(A)))
    np.testing.assert_allclose(cy, py, atol=1e-10)


def test_env_forces_fallback():
    env = dict(os.environ, WGSCHWARZ_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from wgschwarz import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.backend_kernels("fortran")
