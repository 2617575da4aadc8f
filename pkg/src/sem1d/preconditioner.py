"""Block-diagonal preconditioner for the normal equations.

Each element contributes the (W+1) x (W+1) matrix of the quadratic form
eps^4 ||u''||^2 + ||u||^2 restricted to that element:

    M_l = eps^4 (2/h_l)^3 S2 + (h_l/2) M0,

with S2 and M0 the reference second-derivative and mass forms assembled by
quadrature.  Blocks are factorized once (Cholesky) and reused every PCG
iteration.  Jump and boundary rows contribute nothing, which is what keeps
the preconditioner block-diagonal and cheap.
"""

from __future__ import annotations

import numpy as np

from . import backend
from .basis import QuadratureRule, eval_matrices, gll_rule
from .mesh import Mesh

__all__ = ["BlockPreconditioner", "build_preconditioner"]

KINDS = ("block", "jacobi", "identity")


class BlockPreconditioner:
    """Factorized preconditioner; `apply_inverse` is pure and reentrant."""

    def __init__(self, kind: str, N: int, p: int, blocks=None, chol=None, diag=None):
        self.kind = kind
        self.N = N
        self.p = p
        self.dim = N * p
        self.blocks = blocks
        self._chol = chol
        self._diag = diag

    def _check(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if r.size != self.dim:
            raise ValueError(f"vector of length {r.size} does not match dim {self.dim}")
        return r

    def apply_inverse(self, r) -> np.ndarray:
        """z solving M z = r, blockwise via the stored factorizations."""
        r = self._check(r)
        if self.kind == "identity":
            return r.copy()
        if self.kind == "jacobi":
            return r / self._diag
        r2 = np.ascontiguousarray(r.reshape(self.N, self.p))
        out = np.empty_like(r2)
        backend.block_cholesky_solve(self._chol, r2, out)
        return out.ravel()

    def apply(self, u) -> np.ndarray:
        """M u (used for cross-checks; the solver only needs the inverse)."""
        u = self._check(u)
        if self.kind == "identity":
            return u.copy()
        if self.kind == "jacobi":
            return u * self._diag
        u2 = u.reshape(self.N, self.p)
        return np.einsum("lij,lj->li", self.blocks, u2).ravel()

    def quadratic_form(self, u) -> float:
        """<M u, u>."""
        u = self._check(u)
        return float(u @ self.apply(u))


def build_preconditioner(mesh: Mesh, eps: float, W: int,
                         rule: QuadratureRule | None = None,
                         basis: str = "legendre",
                         kind: str = "block") -> BlockPreconditioner:
    """Assemble and factorize the per-element blocks.

    The rule must integrate degree-2W products exactly (q >= W+2); the
    default rule matches the one the operator uses.  `kind` selects the
    full block form, its diagonal (Jacobi), or the identity.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown preconditioner kind {kind!r}; choose from {KINDS}")
    if W < 0:
        raise ValueError("polynomial order must be nonnegative")
    if rule is None:
        rule = gll_rule(2 * W + 2)
    if 2 * rule.q - 3 < 2 * W:
        raise ValueError("quadrature is not exact for degree-2W products")
    N, p = mesh.N, W + 1
    if kind == "identity":
        return BlockPreconditioner(kind, N, p)

    ev = eval_matrices(W, rule, basis)
    w = rule.weights[:, None]
    m0 = ev.D0.T @ (w * ev.D0)
    s2 = ev.D2.T @ (w * ev.D2)
    h = mesh.widths
    blocks = ((h / 2.0)[:, None, None] * m0[None]
              + eps**4 * ((2.0 / h) ** 3)[:, None, None] * s2[None])
    blocks = np.ascontiguousarray((blocks + blocks.transpose(0, 2, 1)) / 2.0)
    if kind == "jacobi":
        diag = np.ascontiguousarray(np.diagonal(blocks, axis1=1, axis2=2)).ravel()
        return BlockPreconditioner(kind, N, p, diag=diag)
    try:
        chol = np.linalg.cholesky(blocks)
    except np.linalg.LinAlgError as exc:  # mass term guarantees SPD
        raise np.linalg.LinAlgError(
            f"preconditioner block factorization failed: {exc}") from exc
    return BlockPreconditioner(kind, N, p, blocks=blocks,
                               chol=np.ascontiguousarray(chol))
