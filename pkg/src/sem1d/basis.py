"""Legendre polynomials, Gauss-Lobatto-Legendre quadrature, and
reference-element evaluation matrices.

Everything here lives on the reference interval [-1, 1].  A rule with q
nodes integrates polynomials of degree <= 2q-3 exactly; evaluation
matrices map a coefficient vector of length W+1 to values and first/second
derivatives at the quadrature nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.polynomial.legendre as npleg

__all__ = [
    "QuadratureRule",
    "EvalMatrices",
    "legendre_eval",
    "basis_table",
    "gll_rule",
    "eval_matrices",
    "monomial_to_legendre",
    "legendre_to_monomial",
]

_NEWTON_MAX_ITERS = 100
_NEWTON_TOL = 1e-15

BASIS_KINDS = ("legendre", "monomial")


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights of a quadrature rule on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def q(self) -> int:
        """Number of nodes."""
        return len(self.nodes)


@dataclass(frozen=True, eq=False)
class EvalMatrices:
    """Basis values and derivatives sampled at quadrature nodes.

    D0, D1, D2 are q x (W+1); for a coefficient vector c, (D0 @ c)[j] is the
    polynomial value at node j and D1/D2 give first/second derivatives in
    the reference coordinate.
    """

    D0: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    basis: str

    @property
    def W(self) -> int:
        return self.D0.shape[1] - 1


def legendre_eval(n: int, x: float):
    """P_n(x) and its first two derivatives at a single point of [-1, 1].

    Uses the three-term recurrence; at x = +-1 the derivatives come from
    the closed forms P_n'(+-1) = (+-1)^(n-1) n(n+1)/2 and
    P_n''(+-1) = (+-1)^n (n-1)n(n+1)(n+2)/8, which avoids 0/0 in
    derivative formulas based on dividing by (1 - x^2).
    """
    if n < 0:
        raise ValueError("Legendre degree must be nonnegative")
    if abs(x) > 1.0 + 1e-12:
        raise ValueError(f"evaluation point {x} outside [-1, 1]")
    if x == 1.0:
        return 1.0, n * (n + 1) / 2.0, (n - 1) * n * (n + 1) * (n + 2) / 8.0
    if x == -1.0:
        sgn = -1.0 if n % 2 else 1.0
        return sgn, -sgn * n * (n + 1) / 2.0, sgn * (n - 1) * n * (n + 1) * (n + 2) / 8.0
    p_prev, dp_prev, d2p_prev = 1.0, 0.0, 0.0
    if n == 0:
        return p_prev, dp_prev, d2p_prev
    p, dp, d2p = x, 1.0, 0.0
    for k in range(1, n):
        a = (2 * k + 1) / (k + 1)
        b = k / (k + 1)
        p_next = a * x * p - b * p_prev
        dp_next = a * (p + x * dp) - b * dp_prev
        d2p_next = a * (2.0 * dp + x * d2p) - b * d2p_prev
        p_prev, dp_prev, d2p_prev = p, dp, d2p
        p, dp, d2p = p_next, dp_next, d2p_next
    return p, dp, d2p


def _legendre_table(n: int, x: np.ndarray):
    """Vectorized P_k, P_k', P_k'' for k = 0..n; arrays of shape (len(x), n+1)."""
    x = np.asarray(x, dtype=float)
    m = x.shape[0]
    T0 = np.zeros((m, n + 1))
    T1 = np.zeros((m, n + 1))
    T2 = np.zeros((m, n + 1))
    T0[:, 0] = 1.0
    if n >= 1:
        T0[:, 1] = x
        T1[:, 1] = 1.0
    for k in range(1, n):
        a = (2 * k + 1) / (k + 1)
        b = k / (k + 1)
        T0[:, k + 1] = a * x * T0[:, k] - b * T0[:, k - 1]
        T1[:, k + 1] = a * (T0[:, k] + x * T1[:, k]) - b * T1[:, k - 1]
        T2[:, k + 1] = a * (2.0 * T1[:, k] + x * T2[:, k]) - b * T2[:, k - 1]
    # Guarantee the endpoint closed forms exactly where a node is +-1.
    k = np.arange(n + 1, dtype=float)
    d1 = k * (k + 1) / 2.0
    d2 = (k - 1) * k * (k + 1) * (k + 2) / 8.0
    sgn = np.where(np.arange(n + 1) % 2, -1.0, 1.0)
    right = x == 1.0
    left = x == -1.0
    if right.any():
        T0[right] = 1.0
        T1[right] = d1
        T2[right] = d2
    if left.any():
        T0[left] = sgn
        T1[left] = -sgn * d1
        T2[left] = sgn * d2
    return T0, T1, T2


def _monomial_table(n: int, x: np.ndarray):
    x = np.asarray(x, dtype=float)
    i = np.arange(n + 1)
    T0 = x[:, None] ** i
    T1 = np.zeros_like(T0)
    T2 = np.zeros_like(T0)
    if n >= 1:
        T1[:, 1:] = i[1:] * x[:, None] ** (i[1:] - 1)
    if n >= 2:
        T2[:, 2:] = i[2:] * (i[2:] - 1) * x[:, None] ** (i[2:] - 2)
    return T0, T1, T2


def basis_table(W: int, x, basis: str = "legendre"):
    """Values/first/second derivatives of the basis functions phi_0..phi_W at x."""
    if W < 0:
        raise ValueError("polynomial order must be nonnegative")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if basis == "legendre":
        return _legendre_table(W, x)
    if basis == "monomial":
        return _monomial_table(W, x)
    raise ValueError(f"unknown basis kind {basis!r}")


def gll_rule(q: int) -> QuadratureRule:
    """Gauss-Lobatto-Legendre rule with q nodes on [-1, 1].

    The interior nodes are the roots of P_{q-1}', refined by Newton
    iteration from Chebyshev-Lobatto initial guesses; the weights are
    w_i = 2 / (q (q-1) P_{q-1}(x_i)^2).  Exact for degree <= 2q-3.
    """
    if q < 2:
        raise ValueError("a Gauss-Lobatto rule needs at least 2 nodes")
    n = q - 1
    nodes = np.empty(q)
    nodes[0] = -1.0
    nodes[-1] = 1.0
    # Interior roots come in +- pairs: refine the negative half, mirror the rest.
    for i in range((q - 2) // 2):
        x = -np.cos(np.pi * (i + 1) / n)
        converged = False
        for _ in range(_NEWTON_MAX_ITERS):
            _, dp, d2p = legendre_eval(n, x)
            if abs(dp) <= _NEWTON_TOL:
                converged = True
                break
            step = dp / d2p
            x = min(max(x - step, -1.0 + 1e-14), 1.0 - 1e-14)
            # |P'| at a machine-accurate root scales like q^3 * eps, so a
            # step-size stop is needed as well.
            if abs(step) <= _NEWTON_TOL:
                converged = True
                break
        if not converged:
            raise RuntimeError(f"GLL node refinement did not converge for q={q}")
        nodes[i + 1] = x
        nodes[q - 2 - i] = -x
    if (q - 2) % 2 == 1:
        nodes[(q - 1) // 2] = 0.0
    if np.any(np.diff(nodes) <= 0.0):
        raise RuntimeError(f"GLL nodes out of order for q={q}")
    pn = np.array([legendre_eval(n, x)[0] for x in nodes])
    weights = 2.0 / (q * n * pn * pn)
    return QuadratureRule(nodes=nodes, weights=weights)


def eval_matrices(W: int, rule: QuadratureRule, basis: str = "legendre") -> EvalMatrices:
    """Evaluation matrices of the degree-W basis at the nodes of `rule`."""
    T0, T1, T2 = basis_table(W, rule.nodes, basis)
    return EvalMatrices(D0=T0, D1=T1, D2=T2, basis=basis)


def monomial_to_legendre(c) -> np.ndarray:
    """Convert monomial coefficients (ascending powers) to Legendre coefficients."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    out = np.zeros_like(c)
    leg = npleg.poly2leg(c)
    out[: len(leg)] = leg
    return out


def legendre_to_monomial(c) -> np.ndarray:
    """Convert Legendre coefficients to monomial coefficients (ascending powers)."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    out = np.zeros_like(c)
    mono = npleg.leg2poly(c)
    out[: len(mono)] = mono
    return out
