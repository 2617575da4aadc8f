"""Discrete least-squares system for the spectral element discretization.

The residual of an elementwise polynomial solution has three parts:

 * weighted operator-residual samples sqrt(w_j h_l/2) (L u_l - f)(x_{l,j})
   at the quadrature nodes of every element, so their squared sum is the
   quadrature value of sum_l ||L u_l - f||^2 over the elements;
 * the solution-value jump and the physical-derivative jump at every
   interior breakpoint;
 * the two Dirichlet residuals u(a) - alpha and u(b) - beta.

Minimizing the squared norm of this residual leads to normal equations
A^T A u = A^T b.  The normal operator is block tridiagonal (jump rows
couple neighbouring elements only) and is applied matrix-free from
precomputed element blocks at O(N W^2) per product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import Polynomial

from . import backend
from .basis import (QuadratureRule, eval_matrices, gll_rule,
                    monomial_to_legendre)
from .mesh import Mesh
from .problem import Problem

__all__ = [
    "SemSolution",
    "ResidualVector",
    "LeastSquaresSystem",
    "residual",
    "functional_value",
    "solution_from_polynomial",
]

DENSE_DIM_LIMIT = 2000


@dataclass(eq=False)
class SemSolution:
    """Per-element polynomial coefficients: row l holds the coefficients of
    element l in the chosen basis."""

    coeffs: np.ndarray
    basis: str = "legendre"

    def __post_init__(self):
        arr = np.ascontiguousarray(self.coeffs, dtype=float)
        if arr.ndim != 2:
            raise ValueError("coefficients must be an (N, W+1) array")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        self.coeffs = arr

    @property
    def N(self) -> int:
        return self.coeffs.shape[0]

    @property
    def W(self) -> int:
        return self.coeffs.shape[1] - 1

    def to_vector(self) -> np.ndarray:
        return self.coeffs.ravel().copy()

    @classmethod
    def from_vector(cls, vec, N: int, W: int, basis: str = "legendre") -> "SemSolution":
        vec = np.asarray(vec, dtype=float)
        if vec.size != N * (W + 1):
            raise ValueError("vector length does not match N(W+1)")
        return cls(vec.reshape(N, W + 1).copy(), basis=basis)

    def _like(self, other: "SemSolution"):
        if self.basis != other.basis or self.coeffs.shape != other.coeffs.shape:
            raise ValueError("solutions live in different spaces")

    def __add__(self, other: "SemSolution") -> "SemSolution":
        self._like(other)
        return SemSolution(self.coeffs + other.coeffs, basis=self.basis)

    def __sub__(self, other: "SemSolution") -> "SemSolution":
        self._like(other)
        return SemSolution(self.coeffs - other.coeffs, basis=self.basis)

    def __mul__(self, scalar) -> "SemSolution":
        return SemSolution(self.coeffs * float(scalar), basis=self.basis)

    __rmul__ = __mul__


@dataclass(eq=False)
class ResidualVector:
    """Residual components: PDE rows (N, q), jump rows (N-1, 2) holding
    (value jump, physical derivative jump) per interior node, and the two
    boundary rows."""

    pde: np.ndarray
    jumps: np.ndarray
    bnd: np.ndarray

    def to_array(self) -> np.ndarray:
        return np.concatenate([self.pde.ravel(), self.jumps.ravel(), self.bnd])

    def norm_squared(self) -> float:
        return float(np.sum(self.pde**2) + np.sum(self.jumps**2) + np.sum(self.bnd**2))


class LeastSquaresSystem:
    """Least-squares discretization bound to (problem, mesh, W, rule, basis).

    Immutable after construction; `apply_normal` and `residual` are pure,
    so the object can be shared read-only.
    """

    def __init__(self, problem: Problem, mesh: Mesh, W: int,
                 rule: QuadratureRule | None = None, basis: str = "legendre"):
        if W < 0:
            raise ValueError("polynomial order must be nonnegative")
        if rule is None:
            rule = gll_rule(2 * W + 2)
        if rule.q < 2 * W + 2:
            raise ValueError(
                f"quadrature with {rule.q} nodes is too small for W={W}: "
                f"need q >= 2W+2 so degree-4W products integrate exactly")
        self.problem = problem
        self.mesh = mesh
        self.W = int(W)
        self.rule = rule
        self.basis = basis
        self.ev = eval_matrices(W, rule, basis)

        h = mesh.widths
        nodes, weights = rule.nodes, rule.weights
        self._gl = 2.0 / h
        # physical quadrature nodes and weights, per element
        self.nodes_phys = mesh.breakpoints[:-1, None] + (nodes[None, :] + 1.0) * (h[:, None] / 2.0)
        self._sqw = np.sqrt(weights[None, :] * h[:, None] / 2.0)
        ops = (-(problem.eps**2) * (self._gl**2)[:, None, None] * self.ev.D2[None]
               + problem.b * self._gl[:, None, None] * self.ev.D1[None]
               + problem.c * self.ev.D0[None])
        self._G = self._sqw[:, :, None] * ops
        self._fw = self._sqw * np.asarray(problem.f(self.nodes_phys), dtype=float)
        # endpoint rows; GLL nodes contain -1 and +1 exactly
        self._vl = self.ev.D0[0].copy()
        self._vr = self.ev.D0[-1].copy()
        self._dl = self.ev.D1[0].copy()
        self._dr = self.ev.D1[-1].copy()
        self.dim = mesh.N * (W + 1)

    # -- residual map ---------------------------------------------------

    def _check_solution(self, sol: SemSolution):
        if sol.basis != self.basis:
            raise ValueError(f"solution basis {sol.basis!r} != system basis {self.basis!r}")
        if sol.N != self.mesh.N or sol.W != self.W:
            raise ValueError("solution shape does not match the system")

    def residual(self, sol: SemSolution) -> ResidualVector:
        self._check_solution(sol)
        C = sol.coeffs
        pde = np.einsum("lqi,li->lq", self._G, C) - self._fw
        val_r = C @ self._vr
        val_l = C @ self._vl
        der_r = self._gl * (C @ self._dr)
        der_l = self._gl * (C @ self._dl)
        jumps = np.stack([val_r[:-1] - val_l[1:], der_r[:-1] - der_l[1:]], axis=1)
        bnd = np.array([val_l[0] - self.problem.alpha, val_r[-1] - self.problem.beta])
        return ResidualVector(pde=pde, jumps=jumps, bnd=bnd)

    def functional_value(self, sol: SemSolution) -> float:
        """Squared residual norm (the least-squares objective)."""
        return self.residual(sol).norm_squared()

    # -- normal equations -----------------------------------------------

    @cached_property
    def _normal_blocks(self):
        G = self._G
        N, _, p = G.shape
        diag = np.einsum("lqi,lqj->lij", G, G)
        off = np.zeros((max(N - 1, 0), p, p))
        vl, vr, dl, dr, gl = self._vl, self._vr, self._dl, self._dr, self._gl
        for i in range(N - 1):
            diag[i] += np.outer(vr, vr) + gl[i] ** 2 * np.outer(dr, dr)
            diag[i + 1] += np.outer(vl, vl) + gl[i + 1] ** 2 * np.outer(dl, dl)
            off[i] = -np.outer(vr, vl) - gl[i] * gl[i + 1] * np.outer(dr, dl)
        diag[0] += np.outer(vl, vl)
        diag[-1] += np.outer(vr, vr)
        diag = np.ascontiguousarray((diag + diag.transpose(0, 2, 1)) / 2.0)
        off = np.ascontiguousarray(off)
        return diag, off, np.ascontiguousarray(off.transpose(0, 2, 1))

    def apply_normal(self, u) -> np.ndarray:
        """Matrix-free A^T A u."""
        u = np.asarray(u, dtype=float)
        if u.size != self.dim:
            raise ValueError(f"vector of length {u.size} does not match dim {self.dim}")
        u2 = np.ascontiguousarray(u.reshape(self.mesh.N, self.W + 1))
        out = np.empty_like(u2)
        diag, upper, lower = self._normal_blocks
        backend.block_tridiag_matvec(diag, upper, lower, u2, out)
        return out.ravel()

    @cached_property
    def _rhs(self) -> np.ndarray:
        vec = np.einsum("lqi,lq->li", self._G, self._fw)
        vec[0] += self.problem.alpha * self._vl
        vec[-1] += self.problem.beta * self._vr
        return vec.ravel()

    def rhs(self) -> np.ndarray:
        """A^T b, so the normal equations read A^T A u = rhs."""
        return self._rhs.copy()

    def gradient(self, u) -> np.ndarray:
        """Gradient of the functional at coefficient vector u: 2(A^T A u - A^T b)."""
        return 2.0 * (self.apply_normal(u) - self._rhs)

    # -- dense views (testing / eigenvalue estimation) --------------------

    def _check_dense(self):
        if self.dim > DENSE_DIM_LIMIT:
            raise ValueError(f"dense assembly refused for dim {self.dim} > {DENSE_DIM_LIMIT}")

    def dense_residual_matrix(self) -> np.ndarray:
        """The linear part A of the residual map, rows ordered as
        ResidualVector.to_array()."""
        self._check_dense()
        N, q, p = self._G.shape
        rows = N * q + 2 * (N - 1) + 2
        A = np.zeros((rows, self.dim))
        for l in range(N):
            A[l * q:(l + 1) * q, l * p:(l + 1) * p] = self._G[l]
        base = N * q
        for i in range(N - 1):
            A[base + 2 * i, i * p:(i + 1) * p] = self._vr
            A[base + 2 * i, (i + 1) * p:(i + 2) * p] = -self._vl
            A[base + 2 * i + 1, i * p:(i + 1) * p] = self._gl[i] * self._dr
            A[base + 2 * i + 1, (i + 1) * p:(i + 2) * p] = -self._gl[i + 1] * self._dl
        A[-2, :p] = self._vl
        A[-1, (N - 1) * p:] = self._vr
        return A

    def data_vector(self) -> np.ndarray:
        """The data part b of the residual, ordered like the dense rows."""
        N = self.mesh.N
        return np.concatenate([self._fw.ravel(), np.zeros(2 * (N - 1)),
                               [self.problem.alpha, self.problem.beta]])

    def dense_normal_matrix(self) -> np.ndarray:
        """A^T A assembled from the precomputed blocks."""
        self._check_dense()
        diag, upper, _ = self._normal_blocks
        N, p = self.mesh.N, self.W + 1
        M = np.zeros((self.dim, self.dim))
        for l in range(N):
            M[l * p:(l + 1) * p, l * p:(l + 1) * p] = diag[l]
            if l < N - 1:
                M[l * p:(l + 1) * p, (l + 1) * p:(l + 2) * p] = upper[l]
                M[(l + 1) * p:(l + 2) * p, l * p:(l + 1) * p] = upper[l].T
        return M


def residual(sol: SemSolution, problem: Problem, mesh: Mesh,
             rule: QuadratureRule | None = None) -> ResidualVector:
    """Residual of `sol` for the given problem (convenience wrapper)."""
    return LeastSquaresSystem(problem, mesh, sol.W, rule=rule, basis=sol.basis).residual(sol)


def functional_value(sol: SemSolution, problem: Problem, mesh: Mesh,
                     rule: QuadratureRule | None = None) -> float:
    """Least-squares objective of `sol` (convenience wrapper)."""
    return LeastSquaresSystem(problem, mesh, sol.W, rule=rule, basis=sol.basis).functional_value(sol)


def solution_from_polynomial(mesh: Mesh, W: int, coeffs,
                             basis: str = "legendre") -> SemSolution:
    """Elementwise representation of one global polynomial of degree <= W,
    given by monomial coefficients in the physical coordinate."""
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if len(coeffs) > W + 1:
        raise ValueError("polynomial degree exceeds the element order")
    rows = np.zeros((mesh.N, W + 1))
    poly = Polynomial(coeffs)
    for l in range(mesh.N):
        lo, hi = mesh.breakpoints[l], mesh.breakpoints[l + 1]
        local = poly(Polynomial([(lo + hi) / 2.0, (hi - lo) / 2.0])).coef
        row = np.zeros(W + 1)
        row[: len(local)] = local
        rows[l] = monomial_to_legendre(row) if basis == "legendre" else row
    return SemSolution(rows, basis=basis)
