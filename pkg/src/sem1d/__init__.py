"""Least-squares spectral element solver for one-dimensional singularly
perturbed boundary-value problems -eps^2 u'' + b u' + c u = f.

Nonconforming elementwise polynomials with weakly enforced continuity
(value and derivative jumps penalized in the least-squares functional),
Gauss-Lobatto-Legendre quadrature, a block-diagonal spectrally equivalent
preconditioner, and conjugate gradients on the normal equations.
"""

from .analysis import (ConvergenceRecord, eval_solution, relative_error,
                       weighted_h2_norm)
from .assembly import (LeastSquaresSystem, ResidualVector, SemSolution,
                       functional_value, residual, solution_from_polynomial)
from .backend import BACKEND
from .basis import (EvalMatrices, QuadratureRule, basis_table, eval_matrices,
                    gll_rule, legendre_eval, legendre_to_monomial,
                    monomial_to_legendre)
from .mesh import Mesh, mesh_from_breakpoints, uniform_mesh
from .pipeline import (SolveOutcome, condition_point, make_stopping_rule,
                       solve_problem, study_point)
from .preconditioner import BlockPreconditioner, build_preconditioner
from .problem import (BUILTIN_NAMES, ExactSolution, Problem, builtin,
                      manufactured)
from .solver import PcgReport, StoppingRule, estimate_extremes, pcg

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BUILTIN_NAMES",
    "BlockPreconditioner",
    "ConvergenceRecord",
    "EvalMatrices",
    "ExactSolution",
    "LeastSquaresSystem",
    "Mesh",
    "PcgReport",
    "Problem",
    "QuadratureRule",
    "ResidualVector",
    "SemSolution",
    "SolveOutcome",
    "StoppingRule",
    "basis_table",
    "build_preconditioner",
    "builtin",
    "condition_point",
    "estimate_extremes",
    "eval_matrices",
    "eval_solution",
    "functional_value",
    "gll_rule",
    "legendre_eval",
    "legendre_to_monomial",
    "make_stopping_rule",
    "manufactured",
    "mesh_from_breakpoints",
    "monomial_to_legendre",
    "pcg",
    "relative_error",
    "residual",
    "solution_from_polynomial",
    "solve_problem",
    "study_point",
    "uniform_mesh",
    "weighted_h2_norm",
]
