"""Preconditioned conjugate gradients on the normal equations, plus Lanczos
extreme-eigenvalue estimation of the preconditioned operator.

Two stopping rules are supported: a relative tolerance on the
preconditioned inner product <Z, R> (stop when it falls below mu^2 times
its initial value), and an absolute residual threshold
||R||_2 <= C sqrt(log W) / W tied to the discretization accuracy of a
degree-W approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

__all__ = ["StoppingRule", "PcgReport", "pcg", "estimate_extremes"]

STOP_TOLERANCE = "tolerance"
STOP_PAPER = "paper_criterion"
STOP_MAX_ITERS = "max_iters"


@dataclass(frozen=True)
class StoppingRule:
    """Termination rule for `pcg`.

    kind "tol": stop at <Z, R> <= mu^2 <Z0, R0>.
    kind "paper": stop at ||R||_2 <= C sqrt(log W) / W (natural log, W >= 2).
    """

    kind: str = "tol"
    mu: float = 1e-14
    C: float = 1.0
    W: int | None = None
    max_iters: int = 1000

    def __post_init__(self):
        if self.kind not in ("tol", "paper"):
            raise ValueError(f"unknown stopping rule kind {self.kind!r}")
        if self.kind == "tol" and not self.mu > 0.0:
            raise ValueError("relative tolerance mu must be positive")
        if self.kind == "paper":
            if not self.C > 0.0:
                raise ValueError("threshold constant C must be positive")
            if self.W is None or self.W < 2:
                raise ValueError("the residual-threshold rule needs W >= 2")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")

    def residual_threshold(self) -> float:
        """Absolute ||R||_2 threshold of the 'paper' rule."""
        return self.C * math.sqrt(math.log(self.W)) / self.W


@dataclass
class PcgReport:
    """Outcome of one PCG run; history entry k belongs to iterate k."""

    iterations: int
    final_resid_2norm: float
    final_precond_inner: float
    converged: bool
    stop_reason: str
    resid_history: np.ndarray = field(repr=False)
    precond_inner_history: np.ndarray = field(repr=False)


def _fired(stop: StoppingRule, rz: float, rz0: float, resid: float) -> str | None:
    if stop.kind == "tol":
        return STOP_TOLERANCE if rz <= stop.mu**2 * rz0 else None
    return STOP_PAPER if resid <= stop.residual_threshold() else None


def pcg(apply_a, apply_minv, rhs, stop: StoppingRule, x0=None):
    """Solve A x = rhs with preconditioned conjugate gradients.

    `apply_a` must be symmetric positive (semi)definite and `apply_minv`
    the inverse of an SPD preconditioner.  Returns (x, PcgReport); if
    max_iters is reached the best iterate is returned with
    converged=False.  Non-finite values abort with a diagnostic.
    """
    rhs = np.asarray(rhs, dtype=float)
    if x0 is None:
        x = np.zeros_like(rhs)
        r = rhs.copy()
    else:
        x = np.array(x0, dtype=float)
        r = rhs - apply_a(x)
    z = apply_minv(r)
    rz = float(r @ z)
    resid = float(np.linalg.norm(r))
    if not (np.isfinite(rz) and np.isfinite(resid)):
        raise FloatingPointError("non-finite initial residual")
    rz0 = rz
    resid_hist = [resid]
    rz_hist = [rz]
    stop_reason = _fired(stop, rz, rz0, resid)

    p = z.copy()
    k = 0
    while stop_reason is None:
        if k >= stop.max_iters:
            stop_reason = STOP_MAX_ITERS
            break
        Ap = apply_a(p)
        pAp = float(p @ Ap)
        if not np.isfinite(pAp):
            raise FloatingPointError(f"non-finite curvature at iteration {k}")
        if pAp <= 0.0:
            raise ValueError(
                f"nonpositive curvature {pAp:.3e} at iteration {k}: "
                "operator is not positive definite on the search space")
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        z = apply_minv(r)
        rz_new = float(r @ z)
        resid = float(np.linalg.norm(r))
        if not (np.isfinite(rz_new) and np.isfinite(resid)):
            raise FloatingPointError(f"non-finite residual at iteration {k + 1}")
        k += 1
        resid_hist.append(resid)
        rz_hist.append(rz_new)
        stop_reason = _fired(stop, rz_new, rz0, resid)
        if stop_reason is None:
            if rz_new <= 0.0:
                # <R, M^-1 R> lost positivity: the residual is at the
                # rounding floor and no further progress is possible.
                raise ValueError(
                    f"preconditioned inner product {rz_new:.3e} lost "
                    f"positivity at iteration {k}")
            p = z + (rz_new / rz) * p
        rz = rz_new

    report = PcgReport(
        iterations=k,
        final_resid_2norm=resid_hist[-1],
        final_precond_inner=rz_hist[-1],
        converged=stop_reason in (STOP_TOLERANCE, STOP_PAPER),
        stop_reason=stop_reason,
        resid_history=np.array(resid_hist),
        precond_inner_history=np.array(rz_hist),
    )
    return x, report


def estimate_extremes(apply_a, apply_minv, dim: int, iters: int = 50, seed: int = 0):
    """Extreme eigenvalue estimates of the preconditioned operator M^-1 A.

    Runs Lanczos on M^-1 A in the A-inner product (in which the operator is
    self-adjoint), with full reorthogonalization, and returns
    (lambda_min, lambda_max, kappa) from the extreme Ritz values.  Seeded
    random start vectors keep the estimates reproducible; an immediate
    breakdown restarts with a fresh vector, at most 3 times.
    """
    if iters < 10:
        raise ValueError("need at least 10 Lanczos iterations")
    steps = min(iters, dim)
    rng = np.random.default_rng(seed)
    alphas: list[float] = []
    for _ in range(4):
        alphas, betas = [], []
        v = rng.standard_normal(dim)
        s = apply_a(v)
        nrm = math.sqrt(max(float(v @ s), 0.0))
        if nrm <= 0.0:
            continue
        Q = np.zeros((steps + 1, dim))
        S = np.zeros((steps + 1, dim))
        Q[0] = v / nrm
        S[0] = s / nrm
        beta_prev = 0.0
        for k in range(steps):
            w = apply_minv(S[k])
            a = float(w @ S[k])
            alphas.append(a)
            w = w - a * Q[k]
            if k > 0:
                w -= beta_prev * Q[k - 1]
            sw = apply_a(w)
            # full reorthogonalization in the A-inner product; A w is
            # updated by linearity instead of a second operator call
            coeff = S[: k + 1] @ w
            w -= Q[: k + 1].T @ coeff
            sw -= S[: k + 1].T @ coeff
            b = math.sqrt(max(float(w @ sw), 0.0))
            if b <= 1e-12 * max(abs(x) for x in alphas):
                break  # Krylov space exhausted
            betas.append(b)
            beta_prev = b
            Q[k + 1] = w / b
            S[k + 1] = sw / b
        if alphas:
            break
    if not alphas:
        raise RuntimeError("Lanczos failed to start after 3 restarts")
    if len(alphas) == 1:
        lam_min = lam_max = alphas[0]
    else:
        lam = eigvalsh_tridiagonal(np.array(alphas), np.array(betas))
        lam_min, lam_max = float(lam[0]), float(lam[-1])
    return lam_min, lam_max, lam_max / lam_min
