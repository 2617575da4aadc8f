"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria 2-7 drive the command-line interface and parse its CSV output;
criterion 10 re-runs the same commands and compares bytes.  Budgets are
wall-clock seconds.
"""

import itertools
import time

import numpy as np
import pytest

import sem1d
from sem1d.assembly import (LeastSquaresSystem, SemSolution,
                            solution_from_polynomial)
from sem1d.basis import basis_table, gll_rule
from sem1d.cli import main
from sem1d.mesh import mesh_from_breakpoints, uniform_mesh
from sem1d.pipeline import solve_problem, study_point
from sem1d.preconditioner import build_preconditioner
from sem1d.problem import builtin, manufactured
from sem1d.solver import StoppingRule, pcg

ARGS_C2 = ("study", "--example", "example1", "--epsilon", "0.1",
           "--mode", "p", "--W", "4,8,12,16,20")
ARGS_C3 = ("study", "--example", "example1", "--epsilon", "0.001,0.0001",
           "--mode", "p", "--W", "40")
ARGS_C4 = ("study", "--example", "example2", "--epsilon", "0.1",
           "--mode", "hp", "--cn", "1.0", "--W", "8,16,24,32")
ARGS_C5 = ("study", "--example", "example3", "--epsilon", "0.1",
           "--mode", "p", "--W", ",".join(str(w) for w in range(4, 41, 2)))
ARGS_C6A = ("study", "--example", "example4", "--epsilon", "0.1",
            "--mode", "hp", "--cn", "1.0", "--W", "32")
ARGS_C6B = ("study", "--example", "example4", "--epsilon", "0.01",
            "--mode", "hp", "--cn", "1.0", "--W", "40")
ARGS_C7A = ("condnum", "--example", "example3", "--epsilon", "0.1,0.01,0.001",
            "--mode", "hp", "--cn", "0.5", "--W", "8")
ARGS_C7B = ("condnum", "--example", "example3", "--epsilon", "0.1",
            "--mode", "hp", "--cn", "0.25", "--W", "16")
DETERMINISM_ARGS = (ARGS_C2, ARGS_C3, ARGS_C4, ARGS_C5, ARGS_C6A, ARGS_C6B,
                    ARGS_C7A, ARGS_C7B)


def _report(criterion, ok, detail):
    print(f"[criterion {criterion:2d}] {'PASS' if ok else 'FAIL'}: {detail}")
    return ok


def _parse_csv(data: bytes):
    lines = data.decode("utf-8").splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


@pytest.fixture(scope="session")
def cli(tmp_path_factory):
    """Run a CLI command once per distinct argv, caching output bytes."""
    base = tmp_path_factory.mktemp("acceptance")
    counter = itertools.count()
    cache = {}

    def run(argv, fresh=False):
        key = tuple(argv)
        if fresh or key not in cache:
            out = base / f"run{next(counter)}.csv"
            t0 = time.perf_counter()
            code = main(list(argv) + ["--out", str(out)])
            elapsed = time.perf_counter() - t0
            result = (code, out.read_bytes(), elapsed)
            if fresh:
                return result
            cache[key] = result
        return cache[key]

    return run


def _study_errors(data: bytes):
    _, rows = _parse_csv(data)
    return [(float(r[2]), int(r[3]), float(r[6])) for r in rows]


def test_criterion_01_property_suite():
    t0 = time.perf_counter()

    # quadrature exactness for q = 2..20 against analytic moments
    for q in range(2, 21):
        rule = gll_rule(q)
        assert abs(rule.weights.sum() - 2.0) < 1e-13
        for k in range(2 * q - 2):
            exact = 0.0 if k % 2 else 2.0 / (k + 1)
            assert abs(rule.weights @ rule.nodes**k - exact) < 1e-11

    # discrete Legendre orthogonality
    for q in (6, 12, 20):
        rule = gll_rule(q)
        T0, _, _ = basis_table(q - 1, rule.nodes)
        for m in range(q):
            for n in range(m, q):
                if m + n > 2 * q - 3:
                    continue
                inner = np.sum(rule.weights * T0[:, m] * T0[:, n])
                if m == n:
                    assert abs(inner - 2.0 / (2 * n + 1)) < 1e-11 * (2.0 / (2 * n + 1))
                else:
                    assert abs(inner) < 1e-11

    # affine map round trips
    rng = np.random.default_rng(100)
    mesh = mesh_from_breakpoints([-1.0, -0.4, 0.1, 0.6, 1.0])
    for _ in range(100):
        l = int(rng.integers(0, mesh.N))
        xi = float(rng.uniform(-1, 1))
        assert abs(mesh.to_reference(l, mesh.to_physical(l, xi)) - xi) < 1e-14

    # normal operator vs dense column oracle at N=2, W=3
    prob = builtin("example3", 0.2)
    mesh2 = uniform_mesh(-1.0, 1.0, 2)
    system = LeastSquaresSystem(prob, mesh2, 3)
    hom = LeastSquaresSystem(prob.homogeneous(), mesh2, 3)
    cols = []
    for j in range(system.dim):
        e = np.zeros(system.dim)
        e[j] = 1.0
        cols.append(hom.residual(SemSolution.from_vector(e, 2, 3)).to_array())
    A = np.array(cols).T
    for _ in range(25):
        u = rng.standard_normal(system.dim)
        v = rng.standard_normal(system.dim)
        np.testing.assert_allclose(system.apply_normal(u), A.T @ (A @ u),
                                   rtol=1e-10, atol=1e-12)
        assert v @ system.apply_normal(u) == pytest.approx(
            u @ system.apply_normal(v), rel=1e-10, abs=1e-12)
        assert u @ system.apply_normal(u) >= 0.0

    # preconditioner round trip and SPD
    M = build_preconditioner(mesh2, prob.eps, 6)
    for blk in M.blocks:
        np.testing.assert_allclose(blk, blk.T, rtol=0, atol=1e-12)
        assert np.all(np.linalg.eigvalsh(blk) > 0)
    for _ in range(10):
        u = rng.standard_normal(M.dim)
        np.testing.assert_allclose(M.apply_inverse(M.apply(u)), u,
                                   rtol=1e-11, atol=1e-11)

    # PCG finite termination on a dense SPD system of dimension 30
    d = 30
    Q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    Ad = Q @ np.diag(rng.uniform(0.5, 40.0, d)) @ Q.T
    rhs = rng.standard_normal(d)
    x, rep = pcg(lambda v: Ad @ v, lambda v: v.copy(), rhs,
                 StoppingRule(kind="tol", mu=1e-13, max_iters=d + 5))
    assert np.linalg.norm(Ad @ x - rhs) <= 1e-10 * np.linalg.norm(rhs)

    # gradient of the functional vs centered finite differences
    polyprob = manufactured([0.1, -0.8, 0.5, 1.2], eps=0.3, b=0.5, c=1.0,
                            domain=(0.0, 1.0))
    mesh3 = uniform_mesh(0.0, 1.0, 3)
    sysg = LeastSquaresSystem(polyprob, mesh3, 4)
    u = rng.standard_normal(sysg.dim)
    grad = sysg.gradient(u)
    for j in rng.choice(sysg.dim, size=10, replace=False):
        up, dn = u.copy(), u.copy()
        up[j] += 1e-6
        dn[j] -= 1e-6
        fd = (sysg.functional_value(SemSolution.from_vector(up, 3, 4))
              - sysg.functional_value(SemSolution.from_vector(dn, 3, 4))) / 2e-6
        assert grad[j] == pytest.approx(fd, rel=1e-5, abs=1e-7)

    # manufactured polynomial recovery across the (N, W) x eps grid
    worst = 0.0
    for (N, W) in ((1, 4), (4, 4), (8, 6)):
        for eps in (1.0, 0.5, 0.1):
            coeffs = rng.uniform(-1, 1, W + 1)
            p = manufactured(coeffs, eps=eps, b=0.0, c=1.0, domain=(0.0, 1.0))
            out = solve_problem(p, uniform_mesh(0.0, 1.0, N), W)
            worst = max(worst, out.rel_error_pct)
            assert out.rel_error_pct <= 1e-8, (N, W, eps)

    elapsed = time.perf_counter() - t0
    ok = elapsed < 60.0
    _report(1, ok, f"property suite in {elapsed:.1f}s (budget 60s); "
                   f"worst manufactured rel error {worst:.2e}%")
    assert ok


def test_criterion_02_example1_p_eps01(cli):
    code, data, elapsed = cli(ARGS_C2)
    errs = [e for _, _, e in _study_errors(data)]
    decades = np.log10(errs[0]) - np.log10(errs[-1])
    ok = (code == 0 and errs[0] >= 1e-1 and errs[-1] <= 1e-3
          and decades >= 4.0 and elapsed < 10.0)
    _report(2, ok, f"err(W=4)={errs[0]:.2e}%, err(W=20)={errs[-1]:.2e}%, "
                   f"drop={decades:.1f} decades, {elapsed:.1f}s")
    assert ok


def test_criterion_03_example1_p_small_eps(cli):
    code, data, elapsed = cli(ARGS_C3)
    rows = _study_errors(data)
    ok = code in (0, 2) and all(err >= 1e-3 for _, _, err in rows) and elapsed < 30.0
    detail = ", ".join(f"eps={eps:g}: {err:.2e}%" for eps, _, err in rows)
    _report(3, ok, f"layer unresolved at W=40 ({detail}), {elapsed:.1f}s")
    assert ok


def test_criterion_04_example2_hp_exponential(cli):
    code, data, elapsed = cli(ARGS_C4)
    rows = _study_errors(data)
    ws = np.array([w for _, w, _ in rows], dtype=float)
    errs = np.array([e for _, _, e in rows])
    coeffs = np.polyfit(ws, np.log10(errs), 1)
    fit = np.polyval(coeffs, ws)
    ss_res = float(np.sum((np.log10(errs) - fit) ** 2))
    ss_tot = float(np.sum((np.log10(errs) - np.log10(errs).mean()) ** 2))
    r_squared = 1.0 - ss_res / ss_tot
    ok = (code == 0 and errs[-1] <= 1e-8 and r_squared >= 0.9 and elapsed < 120.0)
    _report(4, ok, f"err(W=32)={errs[-1]:.2e}% (<=1e-8), "
                   f"R^2={r_squared:.3f} (>=0.9), {elapsed:.1f}s; "
                   f"errors={[f'{e:.1e}' for e in errs]}")
    assert ok


def test_criterion_05_example3_p_superexponential(cli):
    code, data, elapsed = cli(ARGS_C5)
    rows = _study_errors(data)
    ws = [w for _, w, _ in rows]
    errs = [e for _, _, e in rows]
    err40 = errs[ws.index(40)]
    value_ok = err40 <= 1e-10
    if not value_ok:
        # fall back to the double-precision floor of the same discrete
        # problem, measured by a dense QR least-squares solve
        prob = builtin("example3", 0.1)
        mesh = uniform_mesh(-1.0, 1.0, 1)
        system = LeastSquaresSystem(prob, mesh, 40)
        x, *_ = np.linalg.lstsq(system.dense_residual_matrix(),
                                system.data_vector(), rcond=None)
        floor = sem1d.relative_error(SemSolution.from_vector(x, 1, 40), prob, mesh)
        value_ok = err40 <= 2.0 * floor
    # accelerating decay for W >= 14 while above the rounding floor
    floor_level = 100.0 * min(errs)
    logs = [(w, np.log10(e)) for w, e in zip(ws, errs) if w >= 14 and e >= floor_level]
    second_diffs = [logs[i + 2][1] - 2 * logs[i + 1][1] + logs[i][1]
                    for i in range(len(logs) - 2)]
    shape_ok = len(second_diffs) >= 3 and all(d < 0 for d in second_diffs)
    ok = code == 0 and value_ok and shape_ok and elapsed < 20.0
    _report(5, ok, f"err(W=40)={err40:.2e}%, {len(second_diffs)} pre-floor "
                   f"second differences all negative: {shape_ok}, {elapsed:.1f}s")
    assert ok


def test_criterion_06_example4_hp(cli):
    code_a, data_a, t_a = cli(ARGS_C6A)
    code_b, data_b, t_b = cli(ARGS_C6B)
    err_a = _study_errors(data_a)[0][2]
    err_b = _study_errors(data_b)[0][2]
    elapsed = t_a + t_b
    ok = (code_a == 0 and code_b == 0 and err_a <= 1e-8 and err_b <= 1e-8
          and elapsed < 180.0)
    _report(6, ok, f"eps=0.1 W=32: {err_a:.2e}%, eps=0.01 W=40: {err_b:.2e}% "
                   f"(both <=1e-8), {elapsed:.1f}s")
    assert ok


def test_criterion_07_condition_number_scaling(cli):
    code_a, data_a, t_a = cli(ARGS_C7A)
    code_b, data_b, t_b = cli(ARGS_C7B)
    _, rows_a = _parse_csv(data_a)
    _, rows_b = _parse_csv(data_b)
    eps = np.array([float(r[0]) for r in rows_a])
    kappa = np.array([float(r[3]) for r in rows_a])
    slope = np.polyfit(np.log10(eps), np.log10(kappa), 1)[0]
    kappa8 = kappa[0]
    kappa16 = float(rows_b[0][3])
    ratio = kappa16 / kappa8
    elapsed = t_a + t_b
    ok = (code_a == 0 and code_b == 0 and -2.6 <= slope <= -1.4
          and ratio <= 3.0 and elapsed < 60.0)
    _report(7, ok, f"log-log slope={slope:.2f} (in [-2.6,-1.4]), "
                   f"kappa(W=16)/kappa(W=8)={ratio:.2f} (<=3), {elapsed:.1f}s")
    assert ok


def test_criterion_08_preconditioner_effectiveness():
    prob = builtin("example3", 0.01)
    mesh = uniform_mesh(-1.0, 1.0, 8)
    iters_block = solve_problem(prob, mesh, 16, precond="block").report.iterations
    iters_ident = solve_problem(prob, mesh, 16, precond="identity").report.iterations
    ok = iters_block < 0.5 * iters_ident
    _report(8, ok, f"block={iters_block} vs identity={iters_ident} iterations "
                   f"(need < 50%)")
    assert ok


def test_criterion_09_stopping_rule():
    threshold = np.sqrt(np.log(16)) / 16
    rec_tight, _ = study_point("example1", 0.1, 16, mode="p",
                               stop_kind="tol", mu=1e-14)
    rec_paper, out_paper = study_point("example1", 0.1, 16, mode="p",
                                       stop_kind="paper", C=1.0)
    fired = (out_paper.report.stop_reason == "paper_criterion"
             and out_paper.report.final_resid_2norm <= threshold)
    ratio = rec_paper.rel_error_pct / rec_tight.rel_error_pct
    ok = fired and ratio <= 100.0
    _report(9, ok, f"||R||={out_paper.report.final_resid_2norm:.3e} <= "
                   f"{threshold:.3e}: {fired}; rel_error ratio vs tight run "
                   f"= {ratio:.1f} (need <= 100)")
    assert ok


def test_criterion_10_determinism(cli):
    mismatches = []
    for argv in DETERMINISM_ARGS:
        _, first, _ = cli(argv)
        _, second, _ = cli(argv, fresh=True)
        if first != second:
            mismatches.append(" ".join(argv))
    ok = not mismatches
    _report(10, ok, f"{len(DETERMINISM_ARGS)} commands re-run byte-identically"
                    + (f"; mismatches: {mismatches}" if mismatches else ""))
    assert ok
