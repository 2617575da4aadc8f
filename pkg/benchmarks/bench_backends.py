#!/usr/bin/env python3
"""Timing comparison of the compiled kernel core against the numpy fallback.

The two kernels measured here (block-tridiagonal matvec and blockwise
Cholesky solve) run once per PCG iteration and dominate solve time.  Also
reports measured matvec scaling against the expected O(N W^2) cost and a
full end-to-end solve with the active backend.

Usage: python benchmarks/bench_backends.py
"""

import time

import numpy as np

import sem1d
from sem1d import _kernels_py
from sem1d.assembly import LeastSquaresSystem
from sem1d.mesh import uniform_mesh
from sem1d.preconditioner import build_preconditioner
from sem1d.problem import builtin

try:
    from sem1d import _kernels
except ImportError:
    _kernels = None

SIZES = ((8, 8), (16, 16), (32, 32), (48, 48))
REPEAT = 200


def best_of(fn, repeat=REPEAT, loops=5):
    timings = []
    for _ in range(loops):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        timings.append((time.perf_counter() - t0) / repeat)
    return min(timings)


def build_case(W, N):
    prob = builtin("example3", 0.1)
    mesh = uniform_mesh(-1.0, 1.0, N)
    system = LeastSquaresSystem(prob, mesh, W)
    M = build_preconditioner(mesh, prob.eps, W, rule=system.rule)
    diag, upper, lower = system._normal_blocks
    rng = np.random.default_rng(0)
    x = np.ascontiguousarray(rng.standard_normal((N, W + 1)))
    out = np.empty_like(x)
    return diag, upper, lower, M._chol, x, out


def main():
    print(f"active backend: {sem1d.BACKEND}")
    impls = [("python", _kernels_py)]
    if _kernels is not None:
        impls.append(("compiled", _kernels))
    else:
        print("compiled kernels not built; timing the fallback only")

    header = f"{'W':>4} {'N':>4} {'dim':>6}"
    for name, _ in impls:
        header += f" {name + ' matvec':>18} {name + ' cholsolve':>18}"
    if len(impls) == 2:
        header += f" {'speedup mv':>11} {'speedup ch':>11}"
    print(header)

    matvec_times = {}
    for W, N in SIZES:
        diag, upper, lower, chol, x, out = build_case(W, N)
        row = f"{W:>4} {N:>4} {N * (W + 1):>6}"
        times = {}
        for name, mod in impls:
            t_mv = best_of(lambda: mod.block_tridiag_matvec(diag, upper, lower, x, out))
            t_ch = best_of(lambda: mod.block_cholesky_solve(chol, x, out))
            times[name] = (t_mv, t_ch)
            row += f" {t_mv * 1e6:>15.2f}us {t_ch * 1e6:>15.2f}us"
        if len(impls) == 2:
            row += (f" {times['python'][0] / times['compiled'][0]:>10.1f}x"
                    f" {times['python'][1] / times['compiled'][1]:>10.1f}x")
        matvec_times[(W, N)] = times[impls[-1][0]][0]
        print(row)

    print("\nmatvec scaling vs O(N W^2) (time / (N W^2), should be ~constant):")
    for (W, N), t in matvec_times.items():
        print(f"  W={W:>3} N={N:>3}: {t / (N * W * W) * 1e9:8.3f} ns per N*W^2 unit")

    print("\nfull solve (example3, eps=0.01, hp W=N=32, active backend):")
    prob = builtin("example3", 0.01)
    mesh = uniform_mesh(-1.0, 1.0, 32)
    t0 = time.perf_counter()
    out = sem1d.solve_problem(prob, mesh, 32)
    total = time.perf_counter() - t0
    print(f"  {out.report.iterations} PCG iterations in {total:.3f}s "
          f"({total / max(out.report.iterations, 1) * 1e3:.3f} ms/iteration), "
          f"rel error {out.rel_error_pct:.2e}%")


if __name__ == "__main__":
    main()
