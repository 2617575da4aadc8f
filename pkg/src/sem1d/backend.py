"""Kernel backend selection.

Prefers the compiled Cython core and falls back to the pure-numpy
implementation when the extension is absent.  The environment variable
SEM1D_BACKEND forces a choice: "compiled" raises if the extension is
missing, "python" skips it.
"""

from __future__ import annotations

import os

from . import _kernels_py

_requested = os.environ.get("SEM1D_BACKEND", "auto").lower()
if _requested not in ("auto", "compiled", "python"):
    raise ImportError(f"SEM1D_BACKEND must be 'compiled' or 'python', got {_requested!r}")

_impl = None
if _requested in ("auto", "compiled"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "compiled":
            raise
if _impl is None:
    _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "compiled"

block_tridiag_matvec = _impl.block_tridiag_matvec
block_cholesky_solve = _impl.block_cholesky_solve
