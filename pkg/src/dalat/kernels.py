"""Inner-loop backend selection.

The compiled extension ``dalat._ckernels`` is used when it imports; set
``DALAT_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
import os

if os.environ.get("DALAT_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as backend
else:
    try:
        from . import _ckernels as backend
    except ImportError:  # extension not built
        from . import _pykernels as backend

basis_row_exact = backend.basis_row_exact
basis_row_float = backend.basis_row_float
ferrand_residual = backend.ferrand_residual
shifted_sums = backend.shifted_sums
IMPLEMENTATION = backend.IMPLEMENTATION

__all__ = [
    "basis_row_exact",
    "basis_row_float",
    "ferrand_residual",
    "shifted_sums",
    "IMPLEMENTATION",
]
