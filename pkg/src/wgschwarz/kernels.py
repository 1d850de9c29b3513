"""Selects the compiled eigenvalue kernel, falling back to pure Python.

Set ``WGSCHWARZ_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
hessenberg = _kernels_py.hessenberg
hqr_eigvals = _kernels_py.hqr_eigvals

if not os.environ.get("WGSCHWARZ_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        hessenberg = _compiled.hessenberg
        hqr_eigvals = _compiled.hqr_eigvals


def backend_kernels(name: str):
    """``(hessenberg, hqr_eigvals)`` for ``"python"`` or ``"cython"``."""
    if name == "python":
        return _kernels_py.hessenberg, _kernels_py.hqr_eigvals
    if name == "cython":
        from . import _kernels as compiled

        return compiled.hessenberg, compiled.hqr_eigvals
    raise ValueError(f"unknown kernel backend {name!r}")
