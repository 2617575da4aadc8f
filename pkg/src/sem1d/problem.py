"""Boundary-value problem definitions.

The operator is L u = -eps^2 u'' + b u' + c u on (a, b) with Dirichlet data
u(a) = alpha, u(b) = beta.  Four built-in benchmark problems with known
exact solutions are provided, plus manufactured polynomial problems for
testing.  All built-in exact solutions are written with non-positive
exponents only, so they evaluate without overflow down to eps = 1e-6 and
beyond.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
import numpy.polynomial.polynomial as npoly

__all__ = ["ExactSolution", "Problem", "builtin", "manufactured", "BUILTIN_NAMES"]

BUILTIN_NAMES = ("example1", "example2", "example3", "example4")


class ExactSolution(NamedTuple):
    """Exact solution and its first two derivatives, as pure vectorized callables."""

    u: Callable
    du: Callable
    d2u: Callable


@dataclass(frozen=True)
class Problem:
    """One instance of L u = -eps^2 u'' + b u' + c u = f with Dirichlet data."""

    eps: float
    b: float
    c: float
    f: Callable
    domain: tuple
    alpha: float
    beta: float
    exact: ExactSolution | None = None
    name: str = "custom"

    def __post_init__(self):
        if not self.eps > 0.0:
            raise ValueError("layer parameter eps must be positive")
        if not self.domain[0] < self.domain[1]:
            raise ValueError("domain must satisfy a < b")
        if self.exact is not None and not isinstance(self.exact, ExactSolution):
            object.__setattr__(self, "exact", ExactSolution(*self.exact))

    def apply_operator(self, u0, u1, u2):
        """L u from samples of u, u', u''."""
        return -self.eps**2 * u2 + self.b * u1 + self.c * u0

    def homogeneous(self) -> "Problem":
        """Copy with f = 0 and zero boundary data (same operator)."""
        return dataclasses.replace(
            self, f=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
            alpha=0.0, beta=0.0, exact=None, name=self.name + "-homogeneous",
        )

    def check_consistency(self, samples: int = 50, boundary_tol: float = 1e-10,
                          residual_tol: float = 1e-8):
        """Verify that the attached exact solution solves the problem.

        Raises ValueError if the boundary values disagree or if
        L u_exact - f exceeds `residual_tol` relative to the data scale at
        `samples` interior points.
        """
        if self.exact is None:
            raise ValueError("problem has no exact solution attached")
        a, b = self.domain
        if abs(float(self.exact.u(a)) - self.alpha) > boundary_tol:
            raise ValueError(f"exact solution does not match alpha at x={a}")
        if abs(float(self.exact.u(b)) - self.beta) > boundary_tol:
            raise ValueError(f"exact solution does not match beta at x={b}")
        x = np.linspace(a, b, samples)
        fx = np.asarray(self.f(x), dtype=float)
        lu = self.apply_operator(self.exact.u(x), self.exact.du(x), self.exact.d2u(x))
        scale = max(1.0, float(np.max(np.abs(fx))))
        gap = float(np.max(np.abs(lu - fx)))
        if gap > residual_tol * scale:
            raise ValueError(f"exact solution residual {gap:.3e} exceeds tolerance")


def builtin(name: str, eps: float) -> Problem:
    """One of the four benchmark layer problems at layer parameter eps.

    example1: reaction-diffusion on (0, 1), layer at the left end.
    example2: reaction-diffusion on (-1, 1), layer at the right end.
    example3: reaction-diffusion on (-1, 1), layers at both ends.
    example4: convection-diffusion on (-1, 1), layer at the right end.
    """
    if not 0.0 < eps <= 1.0:
        raise ValueError("layer parameter must lie in (0, 1]")
    if name == "example1":
        return _example1(eps)
    if name == "example2":
        return _example2(eps)
    if name == "example3":
        return _example3(eps)
    if name == "example4":
        return _example4(eps)
    raise ValueError(f"unknown builtin problem {name!r}; choose from {BUILTIN_NAMES}")


def _example1(eps: float) -> Problem:
    # -eps^2 u'' + u = f on (0, 1), u = exp(-x/eps) + e^x - x (e + e^(-1/eps)) - 2(1-x)
    k = np.e + np.exp(-1.0 / eps)

    def u(x):
        return np.exp(-x / eps) + np.exp(x) - k * x - 2.0 * (1.0 - x)

    def du(x):
        return -np.exp(-x / eps) / eps + np.exp(x) - k + 2.0

    def d2u(x):
        return np.exp(-x / eps) / eps**2 + np.exp(x)

    def f(x):
        return (1.0 - eps * eps) * np.exp(x) - k * x - 2.0 * (1.0 - x)

    return Problem(eps=eps, b=0.0, c=1.0, f=f, domain=(0.0, 1.0), alpha=0.0,
                   beta=0.0, exact=ExactSolution(u, du, d2u), name="example1")


def _example2(eps: float) -> Problem:
    # -eps^2 u'' + u = -(x+1)/2 on (-1, 1); u = sinh((x+1)/eps)/sinh(2/eps) - (x+1)/2
    # rewritten with non-positive exponents.
    denom = 1.0 - np.exp(-4.0 / eps)

    def _layers(x):
        return np.exp((x - 1.0) / eps), np.exp(-(x + 3.0) / eps)

    def u(x):
        grow, decay = _layers(x)
        return (grow - decay) / denom - (x + 1.0) / 2.0

    def du(x):
        grow, decay = _layers(x)
        return (grow + decay) / (eps * denom) - 0.5

    def d2u(x):
        grow, decay = _layers(x)
        return (grow - decay) / (eps * eps * denom)

    def f(x):
        return -(x + 1.0) / 2.0

    return Problem(eps=eps, b=0.0, c=1.0, f=f, domain=(-1.0, 1.0), alpha=0.0,
                   beta=0.0, exact=ExactSolution(u, du, d2u), name="example2")


def _example3(eps: float) -> Problem:
    # -eps^2 u'' + u = 1 on (-1, 1); u = 1 - cosh(x/eps)/cosh(1/eps), rewritten
    # with non-positive exponents.
    denom = 1.0 + np.exp(-2.0 / eps)

    def _layers(x):
        return np.exp((x - 1.0) / eps), np.exp(-(x + 1.0) / eps)

    def u(x):
        right, left = _layers(x)
        return 1.0 - (right + left) / denom

    def du(x):
        right, left = _layers(x)
        return -(right - left) / (eps * denom)

    def d2u(x):
        right, left = _layers(x)
        return -(right + left) / (eps * eps * denom)

    def f(x):
        return np.ones_like(np.asarray(x, dtype=float))

    return Problem(eps=eps, b=0.0, c=1.0, f=f, domain=(-1.0, 1.0), alpha=0.0,
                   beta=0.0, exact=ExactSolution(u, du, d2u), name="example3")


def _example4(eps: float) -> Problem:
    # Convection-diffusion with layer width eps at x = 1:
    #   -eps u'' + u' = -1/2,  u = (exp((x+1)/eps) - 1)/(exp(2/eps) - 1) - (x+1)/2.
    # The operator stores the diffusion coefficient as eps_op^2, so
    # eps_op = sqrt(eps) represents diffusion eps.
    denom = 1.0 - np.exp(-2.0 / eps)
    tail = np.exp(-2.0 / eps)

    def u(x):
        return (np.exp((x - 1.0) / eps) - tail) / denom - (x + 1.0) / 2.0

    def du(x):
        return np.exp((x - 1.0) / eps) / (eps * denom) - 0.5

    def d2u(x):
        return np.exp((x - 1.0) / eps) / (eps * eps * denom)

    def f(x):
        return np.full_like(np.asarray(x, dtype=float), -0.5)

    return Problem(eps=float(np.sqrt(eps)), b=1.0, c=0.0, f=f, domain=(-1.0, 1.0),
                   alpha=0.0, beta=0.0, exact=ExactSolution(u, du, d2u),
                   name="example4")


def manufactured(u_poly, eps: float, b: float = 0.0, c: float = 1.0,
                 domain: tuple = (0.0, 1.0)) -> Problem:
    """Problem whose exact solution is the polynomial with the given
    monomial coefficients (ascending powers, in the physical coordinate).

    f, alpha, beta are derived exactly from the polynomial.
    """
    coeffs = np.atleast_1d(np.asarray(u_poly, dtype=float))
    d1 = npoly.polyder(coeffs)
    d2 = npoly.polyder(coeffs, 2)
    f_coeffs = npoly.polyadd(
        npoly.polyadd(-eps**2 * d2, b * d1), c * coeffs
    )

    def f(x):
        return npoly.polyval(np.asarray(x, dtype=float), f_coeffs)

    exact = ExactSolution(
        u=lambda x: npoly.polyval(np.asarray(x, dtype=float), coeffs),
        du=lambda x: npoly.polyval(np.asarray(x, dtype=float), d1),
        d2u=lambda x: npoly.polyval(np.asarray(x, dtype=float), d2),
    )
    a, bb = domain
    return Problem(eps=eps, b=b, c=c, f=f, domain=(float(a), float(bb)),
                   alpha=float(npoly.polyval(a, coeffs)),
                   beta=float(npoly.polyval(bb, coeffs)),
                   exact=exact, name="manufactured")
