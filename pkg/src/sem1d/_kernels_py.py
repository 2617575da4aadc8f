"""Pure-numpy implementation of the per-iteration solver kernels.

Same contracts as the compiled module `sem1d._kernels`; used as the
fallback when the extension is not built.  All arrays are float64 and
C-contiguous; `x`/`r` and `out` have shape (N, p) with one row per element.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_solve

__all__ = ["block_tridiag_matvec", "block_cholesky_solve"]


def block_tridiag_matvec(diag, upper, lower, x, out):
    """out = T x for the symmetric block-tridiagonal operator T.

    diag holds the (N, p, p) diagonal blocks and upper the (N-1, p, p)
    blocks coupling element l to element l+1; lower holds their transposes
    (stored contiguously, shared contract with the compiled kernel).
    """
    np.einsum("lij,lj->li", diag, x, out=out)
    if len(upper):
        out[1:] += np.einsum("lij,lj->li", lower, x[:-1])
        out[:-1] += np.einsum("lij,lj->li", upper, x[1:])


def block_cholesky_solve(chol, r, out):
    """Solve (L_l L_l^T) z_l = r_l per block with stored lower factors."""
    for l in range(len(chol)):
        out[l] = cho_solve((chol[l], True), r[l], check_finite=False)
