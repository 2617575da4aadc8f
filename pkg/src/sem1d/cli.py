"""Batch command-line driver.

Subcommands:
  solve    one (example, eps, W) instance; solution-sample CSV + summary line
  study    convergence study over a W sweep; record CSV and optional SVG
  condnum  condition-number estimates over an eps/W sweep; (eps, W, N, kappa) CSV

CSV output is UTF-8, comma-separated, LF line endings, with a header row;
floats carry 17 significant digits so identical flags reproduce identical
bytes.  Exit status: 0 on success, 1 on usage errors, 2 when the solver
did not converge.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from ._svg import write_semilog_svg
from .analysis import eval_solution
from .pipeline import condition_point, study_point
from .problem import BUILTIN_NAMES

__all__ = ["main"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_CONVERGENCE = 2

STUDY_COLUMNS = ("example", "mode", "epsilon", "W", "N", "dof",
                 "rel_error_pct", "pcg_iterations")
CONDNUM_COLUMNS = ("epsilon", "W", "N", "kappa")
SOLVE_COLUMNS = ("x", "u_sem", "u_exact", "pointwise_error")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path, columns, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _float_list(text: str, flag: str):
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"{flag} expects a comma-separated list of numbers") from exc
    if not values:
        raise _UsageError(f"{flag} list is empty")
    return values

def _int_list(text: str, flag: str):
    values = _float_list(text, flag)
    ints = [int(v) for v in values]
    if any(i != v for i, v in zip(ints, values)):
        raise _UsageError(f"{flag} expects integers")
    return ints


def _add_common(p: _Parser):
    p.add_argument("--example", required=True, choices=BUILTIN_NAMES)
    p.add_argument("--epsilon", required=True,
                   help="layer parameter; comma list gives one series per value")
    p.add_argument("--W", required=True, dest="W",
                   help="polynomial order; comma list for sweeps")
    p.add_argument("--mode", choices=("p", "hp"), default="p")
    p.add_argument("--cn", type=float, default=1.0,
                   help="hp proportionality: N = max(1, round(cn * W))")
    p.add_argument("--basis", choices=("legendre", "monomial"), default="legendre")
    p.add_argument("--stop", choices=("tol", "paper"), default="tol")
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--C", type=float, default=1.0, dest="C")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--quad-order", type=int, default=None)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--svg", default=None, help="optional SVG plot path")
    p.add_argument("--precond", choices=("block", "jacobi", "identity"),
                   default="block")
    p.add_argument("--seed", type=int, default=0)


def _build_parser() -> _Parser:
    parser = _Parser(prog="sem1d",
                     description="Least-squares spectral element solver for "
                                 "1D boundary-layer problems")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (("solve", "solve one instance and sample the solution"),
                      ("study", "convergence study over a W sweep"),
                      ("condnum", "condition-number estimates over a sweep")):
        _add_common(sub.add_parser(name, help=doc))
    return parser


def _validate_sweeps(args):
    eps_list = _float_list(args.epsilon, "--epsilon")
    w_list = _int_list(args.W, "--W")
    for eps in eps_list:
        if not 0.0 < eps <= 1.0:
            raise _UsageError(f"--epsilon {eps:g} outside (0, 1]")
    if any(w < 0 for w in w_list):
        raise _UsageError("--W must be nonnegative")
    if len(w_list) > 1 and any(b <= a for a, b in zip(w_list, w_list[1:])):
        raise _UsageError("--W sweep must be strictly increasing")
    if len(eps_list) > 1 and args.command == "solve":
        raise _UsageError("solve expects a single --epsilon")
    if len(w_list) > 1 and args.command == "solve":
        raise _UsageError("solve expects a single --W")
    if args.cn <= 0.0:
        raise _UsageError("--cn must be positive")
    return eps_list, w_list


def _solve_kwargs(args):
    return dict(basis=args.basis, precond=args.precond, stop_kind=args.stop,
                mu=args.tol, C=args.C, max_iters=args.max_iters,
                quad_order=args.quad_order)


def _cmd_solve(args, eps_list, w_list) -> int:
    rec, out = study_point(args.example, eps_list[0], w_list[0],
                           mode=args.mode, cn=args.cn, **_solve_kwargs(args))
    prob = out.system.problem
    mesh = out.system.mesh
    xs = np.linspace(mesh.a, mesh.b, 401)
    u_sem = eval_solution(out.solution, mesh, xs)
    rows = []
    if prob.exact is not None:
        u_exact = np.asarray(prob.exact.u(xs), dtype=float)
        for x, us, ue in zip(xs, u_sem, u_exact):
            rows.append((_fmt(x), _fmt(us), _fmt(ue), _fmt(us - ue)))
    else:
        for x, us in zip(xs, u_sem):
            rows.append((_fmt(x), _fmt(us), "", ""))
    _write_csv(args.out, SOLVE_COLUMNS, rows)
    rel = "n/a" if rec.rel_error_pct is None else f"{rec.rel_error_pct:.6e}"
    print(f"solve {args.example} eps={eps_list[0]:g} W={w_list[0]} N={rec.N}: "
          f"rel_error_pct={rel} iterations={rec.pcg_iterations} "
          f"functional={out.functional_value:.6e} "
          f"converged={out.report.converged} "
          f"wall={rec.wall_time_seconds:.3f}s")
    if not out.report.converged:
        print("solver did not converge within the iteration cap", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _cmd_study(args, eps_list, w_list) -> int:
    rows = []
    series = []
    all_converged = True
    for eps in eps_list:
        errs = []
        for w in w_list:
            rec, out = study_point(args.example, eps, w, mode=args.mode,
                                   cn=args.cn, **_solve_kwargs(args))
            all_converged &= out.report.converged
            rows.append((rec.example, rec.mode, _fmt(rec.eps), str(rec.W),
                         str(rec.N), str(rec.dof), _fmt(rec.rel_error_pct),
                         str(rec.pcg_iterations)))
            errs.append(rec.rel_error_pct)
            print(f"study {rec.example} {rec.mode} eps={eps:g} W={w} N={rec.N}: "
                  f"rel_error_pct={rec.rel_error_pct:.6e} "
                  f"iterations={rec.pcg_iterations} "
                  f"converged={out.report.converged} "
                  f"wall={rec.wall_time_seconds:.3f}s")
        series.append((f"eps={eps:g}", list(w_list), errs))
    _write_csv(args.out, STUDY_COLUMNS, rows)
    if args.svg:
        write_semilog_svg(args.svg, series,
                          title=f"{args.example} ({args.mode}-refinement)")
    if not all_converged:
        print("at least one sweep point did not converge", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _cmd_condnum(args, eps_list, w_list) -> int:
    rows = []
    series = []
    for eps in eps_list:
        kappas = []
        for w in w_list:
            N, (lam_min, lam_max, kappa) = condition_point(
                args.example, eps, w, mode=args.mode, cn=args.cn,
                basis=args.basis, precond=args.precond, seed=args.seed)
            rows.append((_fmt(eps), str(w), str(N), _fmt(kappa)))
            kappas.append(kappa)
            print(f"condnum {args.example} eps={eps:g} W={w} N={N}: "
                  f"lambda_min={lam_min:.6e} lambda_max={lam_max:.6e} "
                  f"kappa={kappa:.6e}")
        series.append((f"eps={eps:g}", list(w_list), kappas))
    _write_csv(args.out, CONDNUM_COLUMNS, rows)
    if args.svg:
        write_semilog_svg(args.svg, series, ylabel="condition number",
                          title=f"{args.example} preconditioned condition number")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        eps_list, w_list = _validate_sweeps(args)
        if args.command == "solve":
            return _cmd_solve(args, eps_list, w_list)
        if args.command == "study":
            return _cmd_study(args, eps_list, w_list)
        return _cmd_condnum(args, eps_list, w_list)
    except _UsageError as exc:
        print(f"sem1d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, FloatingPointError) as exc:
        print(f"sem1d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
