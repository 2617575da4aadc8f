"""Weighted Sobolev norms, relative-error computation, pointwise evaluation
of elementwise solutions, and convergence records.

Errors are measured in the layer-weighted norm
sqrt(||u||^2 + eps^2 ||u'||^2 + eps^4 ||u''||^2), accumulated elementwise
by quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import SemSolution
from .basis import QuadratureRule, basis_table, eval_matrices, gll_rule
from .mesh import Mesh
from .problem import Problem

__all__ = [
    "ConvergenceRecord",
    "eval_solution",
    "weighted_h2_norm",
    "relative_error",
]

# Closed-form exact solutions are not polynomial, so error quadrature uses
# a fixed high-order rule independent of W.
ERROR_RULE_NODES = 64


@dataclass
class ConvergenceRecord:
    """One row of a convergence study."""

    example: str
    mode: str
    eps: float
    W: int
    N: int
    dof: int
    rel_error_pct: float
    pcg_iterations: int
    wall_time_seconds: float
    kappa: float | None = None

    def __post_init__(self):
        if self.dof != self.N * (self.W + 1):
            raise ValueError("dof must equal N(W+1)")
        if self.rel_error_pct < 0.0:
            raise ValueError("relative error cannot be negative")


def eval_solution(sol: SemSolution, mesh: Mesh, xs, derivatives: bool = False):
    """Evaluate an elementwise solution at physical points of [a, b].

    Points on interior breakpoints use the left element's polynomial.
    With derivatives=True returns (values, first, second) with the
    derivatives scaled to the physical coordinate.
    """
    if sol.N != mesh.N:
        raise ValueError("solution and mesh element counts differ")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    idx = mesh.locate(xs)
    h = mesh.widths[idx]
    lo = mesh.breakpoints[idx]
    xi = (2.0 * xs - (2.0 * lo + h)) / h
    T0, T1, T2 = basis_table(sol.W, xi, sol.basis)
    C = sol.coeffs[idx]
    vals = np.einsum("pi,pi->p", T0, C)
    if not derivatives:
        return vals
    g = 2.0 / h
    d1 = g * np.einsum("pi,pi->p", T1, C)
    d2 = g**2 * np.einsum("pi,pi->p", T2, C)
    return vals, d1, d2


def _element_samples(sol: SemSolution, mesh: Mesh, rule: QuadratureRule):
    """(values, u', u'') of `sol` at the rule's nodes in every element,
    shape (N, q), derivatives in the physical coordinate."""
    ev = eval_matrices(sol.W, rule, sol.basis)
    C = sol.coeffs
    g = 2.0 / mesh.widths
    v0 = C @ ev.D0.T
    v1 = g[:, None] * (C @ ev.D1.T)
    v2 = (g**2)[:, None] * (C @ ev.D2.T)
    return v0, v1, v2


def _callable_samples(fns, mesh: Mesh, rule: QuadratureRule):
    u, du, d2u = fns
    h = mesh.widths
    xq = mesh.breakpoints[:-1, None] + (rule.nodes[None, :] + 1.0) * (h[:, None] / 2.0)
    return (np.asarray(u(xq), dtype=float),
            np.asarray(du(xq), dtype=float),
            np.asarray(d2u(xq), dtype=float))


def _weighted_sum(v0, v1, v2, eps: float, mesh: Mesh, rule: QuadratureRule) -> float:
    contrib = v0**2 + eps**2 * v1**2 + eps**4 * v2**2
    per_element = contrib @ rule.weights * (mesh.widths / 2.0)
    return float(np.sum(per_element))


def weighted_h2_norm(g, eps: float, mesh: Mesh,
                     rule: QuadratureRule | None = None) -> float:
    """sqrt(||g||^2 + eps^2 ||g'||^2 + eps^4 ||g''||^2) by elementwise quadrature.

    `g` is either a SemSolution or a triple of callables (u, u', u'').
    """
    if isinstance(g, SemSolution):
        if rule is None:
            rule = gll_rule(2 * g.W + 2)
        samples = _element_samples(g, mesh, rule)
    else:
        if rule is None:
            rule = gll_rule(ERROR_RULE_NODES)
        samples = _callable_samples(g, mesh, rule)
    return float(np.sqrt(_weighted_sum(*samples, eps, mesh, rule)))


def relative_error(sol: SemSolution, problem: Problem, mesh: Mesh,
                   rule: QuadratureRule | None = None,
                   eps: float | None = None) -> float:
    """Percentage error of `sol` against the problem's exact solution in the
    layer-weighted norm: 100 ||u_sem - u_exact|| / ||u_exact||.

    The difference's derivatives are formed per element before quadrature.
    """
    if problem.exact is None:
        raise ValueError("problem has no exact solution to compare against")
    if rule is None:
        rule = gll_rule(max(ERROR_RULE_NODES, sol.W + 2))
    if eps is None:
        eps = problem.eps
    s0, s1, s2 = _element_samples(sol, mesh, rule)
    e0, e1, e2 = _callable_samples(problem.exact, mesh, rule)
    num = _weighted_sum(s0 - e0, s1 - e1, s2 - e2, eps, mesh, rule)
    den = _weighted_sum(e0, e1, e2, eps, mesh, rule)
    if den == 0.0:
        raise ValueError("exact solution has zero norm")
    return 100.0 * float(np.sqrt(num / den))
