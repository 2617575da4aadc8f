"""End-to-end drivers: discretize a problem, precondition, solve, measure.

These helpers tie the lower-level modules together for single solves,
convergence-study points, and condition-number estimates; the CLI and the
acceptance suite are thin layers on top of them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .analysis import ConvergenceRecord, relative_error
from .assembly import LeastSquaresSystem, SemSolution
from .basis import gll_rule
from .mesh import Mesh, uniform_mesh
from .preconditioner import BlockPreconditioner, build_preconditioner
from .problem import Problem, builtin
from .solver import PcgReport, StoppingRule, estimate_extremes, pcg

__all__ = ["SolveOutcome", "make_stopping_rule", "solve_problem",
           "study_point", "condition_point"]

DEFAULT_ITER_FACTOR = 20


@dataclass
class SolveOutcome:
    """Everything produced by one solve."""

    solution: SemSolution
    report: PcgReport
    system: LeastSquaresSystem
    preconditioner: BlockPreconditioner
    rel_error_pct: float | None
    functional_value: float
    wall_time_seconds: float


def make_stopping_rule(dim: int, kind: str = "tol", mu: float = 1e-14,
                       C: float = 1.0, W: int | None = None,
                       max_iters: int | None = None) -> StoppingRule:
    """Stopping rule with the default iteration cap of 20 * dim."""
    if max_iters is None:
        max_iters = DEFAULT_ITER_FACTOR * dim
    return StoppingRule(kind=kind, mu=mu, C=C,
                        W=W if kind == "paper" else None, max_iters=max_iters)


def solve_problem(problem: Problem, mesh: Mesh, W: int, *,
                  basis: str = "legendre", precond: str = "block",
                  stop_kind: str = "tol", mu: float = 1e-14, C: float = 1.0,
                  max_iters: int | None = None, quad_order: int | None = None,
                  error_rule=None) -> SolveOutcome:
    """Assemble, precondition, and solve one (problem, mesh, W) instance.

    PCG always starts from zero so iteration counts are reproducible.
    """
    rule = gll_rule(quad_order) if quad_order is not None else None
    system = LeastSquaresSystem(problem, mesh, W, rule=rule, basis=basis)
    M = build_preconditioner(mesh, problem.eps, W, rule=system.rule,
                             basis=basis, kind=precond)
    stop = make_stopping_rule(system.dim, kind=stop_kind, mu=mu, C=C, W=W,
                              max_iters=max_iters)
    t0 = time.perf_counter()
    x, report = pcg(system.apply_normal, M.apply_inverse, system.rhs(), stop=stop)
    wall = time.perf_counter() - t0
    sol = SemSolution.from_vector(x, mesh.N, W, basis=basis)
    rel = None
    if problem.exact is not None:
        rel = relative_error(sol, problem, mesh, rule=error_rule)
    return SolveOutcome(solution=sol, report=report, system=system,
                        preconditioner=M, rel_error_pct=rel,
                        functional_value=system.functional_value(sol),
                        wall_time_seconds=wall)


def elements_for(mode: str, W: int, cn: float) -> int:
    """Element count: 1 for the fixed-mesh mode, round(cn * W) otherwise."""
    if mode == "p":
        return 1
    if mode == "hp":
        return max(1, round(cn * W))
    raise ValueError(f"unknown mode {mode!r}")


def study_point(example: str, eps: float, W: int, mode: str = "p",
                cn: float = 1.0, **solve_kwargs):
    """Solve one sweep point of a convergence study.

    Returns (ConvergenceRecord, SolveOutcome).  The record's eps field is
    the requested layer parameter.
    """
    prob = builtin(example, eps)
    N = elements_for(mode, W, cn)
    mesh = uniform_mesh(*prob.domain, N)
    out = solve_problem(prob, mesh, W, **solve_kwargs)
    rec = ConvergenceRecord(example=example, mode=mode, eps=eps, W=W, N=N,
                            dof=N * (W + 1), rel_error_pct=out.rel_error_pct,
                            pcg_iterations=out.report.iterations,
                            wall_time_seconds=out.wall_time_seconds)
    return rec, out


def condition_point(example: str, eps: float, W: int, mode: str = "hp",
                    cn: float = 1.0, basis: str = "legendre",
                    precond: str = "block", iters: int | None = None,
                    seed: int = 0):
    """Estimate (lambda_min, lambda_max, kappa) of the preconditioned
    operator for one (example, eps, W) instance.  Returns (N, estimates)."""
    prob = builtin(example, eps)
    N = elements_for(mode, W, cn)
    mesh = uniform_mesh(*prob.domain, N)
    system = LeastSquaresSystem(prob, mesh, W, basis=basis)
    M = build_preconditioner(mesh, prob.eps, W, rule=system.rule,
                             basis=basis, kind=precond)
    if iters is None:
        iters = min(system.dim, 200)
    iters = max(iters, 10)
    est = estimate_extremes(system.apply_normal, M.apply_inverse,
                            system.dim, iters=iters, seed=seed)
    return N, est
