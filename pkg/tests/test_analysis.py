"""Tests for norms, relative error, and pointwise evaluation."""

import numpy as np
import pytest

from sem1d.analysis import eval_solution, relative_error, weighted_h2_norm
from sem1d.assembly import SemSolution, solution_from_polynomial
from sem1d.basis import gll_rule
from sem1d.mesh import mesh_from_breakpoints, uniform_mesh
from sem1d.pipeline import solve_problem
from sem1d.problem import builtin, manufactured

# Composite 1000 x 10-point Gauss quadrature of the weighted norm of the
# two-layer benchmark's exact solution at eps = 0.1 (independent oracle).
EX3_NORM_EPS01 = 1.3784048783491891


class TestEvalSolution:
    def test_constant(self):
        mesh = uniform_mesh(0.0, 1.0, 3)
        sol = SemSolution(np.tile([2.5, 0.0], (3, 1)))
        xs = np.linspace(0, 1, 9)
        np.testing.assert_allclose(eval_solution(sol, mesh, xs), 2.5, rtol=1e-14)

    def test_linear_on_unit_element(self):
        # u_hat(xi) = xi on (0, 1): at x = 0.75, xi = 0.5
        mesh = uniform_mesh(0.0, 1.0, 1)
        sol = SemSolution(np.array([[0.0, 1.0]]))
        assert eval_solution(sol, mesh, [0.75])[0] == pytest.approx(0.5, abs=1e-15)

    def test_derivative_chain_rule(self):
        # u_hat(xi) = xi^2 on an element of width 0.5: physical derivative
        # at xi = 1 is 2 * (2/0.5) = 8
        mesh = uniform_mesh(0.0, 0.5, 1)
        sol = SemSolution(np.array([[0.0, 0.0, 1.0]]), basis="monomial")
        vals, d1, d2 = eval_solution(sol, mesh, [0.5], derivatives=True)
        assert d1[0] == pytest.approx(8.0, abs=1e-13)
        assert d2[0] == pytest.approx(2.0 * 16.0, abs=1e-12)

    def test_interior_breakpoint_uses_left_element(self):
        mesh = uniform_mesh(0.0, 1.0, 2)
        sol = SemSolution(np.array([[1.0, 0.0], [5.0, 0.0]]))
        assert eval_solution(sol, mesh, [0.5])[0] == 1.0

    def test_outside_domain_rejected(self):
        mesh = uniform_mesh(0.0, 1.0, 2)
        sol = SemSolution(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            eval_solution(sol, mesh, [1.2])

    def test_matches_polynomial(self):
        rng = np.random.default_rng(0)
        mesh = mesh_from_breakpoints([-1.0, -0.2, 0.4, 1.0])
        coeffs = rng.uniform(-1, 1, 5)
        sol = solution_from_polynomial(mesh, 6, coeffs)
        xs = rng.uniform(-1, 1, 40)
        expected = np.polynomial.polynomial.polyval(xs, coeffs)
        np.testing.assert_allclose(eval_solution(sol, mesh, xs), expected,
                                   rtol=1e-12, atol=1e-12)


class TestWeightedNorm:
    def test_constant_one(self):
        mesh = uniform_mesh(0.0, 1.0, 4)
        fns = (lambda x: np.ones_like(x), lambda x: np.zeros_like(x),
               lambda x: np.zeros_like(x))
        assert weighted_h2_norm(fns, 0.37, mesh) == pytest.approx(1.0, rel=1e-13)

    def test_linear(self):
        # g = x on (0, 1): sqrt(1/3 + eps^2)
        mesh = uniform_mesh(0.0, 1.0, 3)
        fns = (lambda x: x, lambda x: np.ones_like(x), lambda x: np.zeros_like(x))
        for eps in (1.0, 0.1):
            assert weighted_h2_norm(fns, eps, mesh) == pytest.approx(
                np.sqrt(1.0 / 3.0 + eps**2), rel=1e-13)

    def test_example3_against_refined_quadrature_oracle(self):
        prob = builtin("example3", 0.1)
        mesh = uniform_mesh(-1.0, 1.0, 1)
        assert weighted_h2_norm(prob.exact, 0.1, mesh) == pytest.approx(
            EX3_NORM_EPS01, rel=1e-8)

    def test_sem_solution_path_matches_callables(self):
        coeffs = [0.4, -1.2, 0.9]
        mesh = uniform_mesh(0.0, 1.0, 3)
        prob = manufactured(coeffs, eps=0.25, b=0.0, c=1.0, domain=(0.0, 1.0))
        sol = solution_from_polynomial(mesh, 4, coeffs)
        n_callable = weighted_h2_norm(prob.exact, 0.25, mesh)
        n_sem = weighted_h2_norm(sol, 0.25, mesh)
        assert n_sem == pytest.approx(n_callable, rel=1e-12)

    def test_homogeneity(self):
        rng = np.random.default_rng(1)
        mesh = uniform_mesh(0.0, 1.0, 2)
        sol = SemSolution(rng.standard_normal((2, 5)))
        lam = -3.7
        assert weighted_h2_norm(lam * sol, 0.2, mesh) == pytest.approx(
            abs(lam) * weighted_h2_norm(sol, 0.2, mesh), rel=1e-12)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(2)
        mesh = uniform_mesh(0.0, 1.0, 2)
        for _ in range(20):
            a = SemSolution(rng.standard_normal((2, 4)))
            b = SemSolution(rng.standard_normal((2, 4)))
            assert weighted_h2_norm(a + b, 0.3, mesh) <= (
                weighted_h2_norm(a, 0.3, mesh) + weighted_h2_norm(b, 0.3, mesh) + 1e-12)


class TestRelativeError:
    def test_exact_polynomial_is_tiny(self):
        coeffs = [0.3, -0.9, 1.1, 0.2]
        prob = manufactured(coeffs, eps=0.4, b=0.0, c=1.0, domain=(0.0, 1.0))
        mesh = uniform_mesh(0.0, 1.0, 4)
        sol = solution_from_polynomial(mesh, 5, coeffs)
        assert relative_error(sol, prob, mesh) <= 1e-8

    def test_zero_solution_is_exactly_hundred(self):
        prob = builtin("example3", 0.2)
        mesh = uniform_mesh(-1.0, 1.0, 2)
        sol = SemSolution(np.zeros((2, 6)))
        assert relative_error(sol, prob, mesh) == 100.0

    def test_doubled_exact_is_hundred(self):
        coeffs = [0.3, -0.9, 1.1]
        prob = manufactured(coeffs, eps=0.4, b=0.0, c=1.0, domain=(0.0, 1.0))
        mesh = uniform_mesh(0.0, 1.0, 3)
        sol = 2.0 * solution_from_polynomial(mesh, 4, coeffs)
        assert relative_error(sol, prob, mesh) == pytest.approx(100.0, rel=1e-9)

    def test_requires_exact_solution(self):
        prob = builtin("example3", 0.2).homogeneous()
        mesh = uniform_mesh(-1.0, 1.0, 2)
        with pytest.raises(ValueError):
            relative_error(SemSolution(np.zeros((2, 3))), prob, mesh)

    def test_quadrature_refinement_invariance(self):
        prob = builtin("example1", 0.1)
        mesh = uniform_mesh(0.0, 1.0, 1)
        out = solve_problem(prob, mesh, 12)
        base = relative_error(out.solution, prob, mesh, rule=gll_rule(64))
        fine = relative_error(out.solution, prob, mesh, rule=gll_rule(128))
        assert fine == pytest.approx(base, rel=1e-6)
