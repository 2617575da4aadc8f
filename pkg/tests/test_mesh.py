"""Tests for mesh construction and the affine element maps."""

import numpy as np
import pytest

from sem1d.mesh import Mesh, mesh_from_breakpoints, uniform_mesh


class TestConstruction:
    def test_uniform_breakpoints(self):
        mesh = uniform_mesh(0.0, 1.0, 4)
        np.testing.assert_allclose(mesh.breakpoints, [0.0, 0.25, 0.5, 0.75, 1.0],
                                   rtol=0, atol=1e-15)

    def test_single_element(self):
        mesh = uniform_mesh(-1.0, 1.0, 1)
        assert mesh.N == 1
        assert mesh.width(0) == 2.0

    def test_three_elements(self):
        mesh = uniform_mesh(-1.0, 1.0, 3)
        np.testing.assert_allclose(mesh.widths, 2.0 / 3.0, rtol=1e-15)
        assert abs(mesh.widths.sum() - 2.0) < 1e-13

    def test_uniformity(self):
        mesh = uniform_mesh(-2.0, 3.0, 17)
        assert mesh.widths.max() - mesh.widths.min() <= 1e-13 * 5.0

    def test_rejects_bad_domain(self):
        with pytest.raises(ValueError):
            uniform_mesh(1.0, 0.0, 4)
        with pytest.raises(ValueError):
            uniform_mesh(0.0, 1.0, 0)

    def test_rejects_unsorted_breakpoints(self):
        with pytest.raises(ValueError):
            mesh_from_breakpoints([0.0, 0.5, 0.4, 1.0])

    def test_nonuniform_accepted(self):
        mesh = mesh_from_breakpoints([0.0, 0.1, 0.5, 1.0])
        assert mesh.N == 3
        np.testing.assert_allclose(mesh.widths, [0.1, 0.4, 0.5], rtol=1e-15)


class TestMaps:
    def test_midpoint(self):
        mesh = mesh_from_breakpoints([0.0, 0.5, 1.0])
        assert mesh.to_physical(0, 0.0) == 0.25

    def test_left_endpoint(self):
        mesh = mesh_from_breakpoints([0.0, 0.5, 1.0])
        assert mesh.to_physical(0, -1.0) == 0.0

    def test_round_trip(self):
        rng = np.random.default_rng(5)
        mesh = mesh_from_breakpoints([-1.0, -0.3, 0.2, 1.0])
        for _ in range(100):
            xi = rng.uniform(-1, 1)
            l = rng.integers(0, mesh.N)
            assert mesh.to_reference(l, mesh.to_physical(l, xi)) == pytest.approx(xi, abs=1e-14)

    def test_jacobian(self):
        mesh = mesh_from_breakpoints([0.0, 0.5, 2.0])
        assert mesh.jacobian(0) == 0.25
        assert mesh.jacobian(1) == 0.75

    def test_index_out_of_range(self):
        mesh = uniform_mesh(0.0, 1.0, 2)
        with pytest.raises(IndexError):
            mesh.to_physical(2, 0.0)
        with pytest.raises(IndexError):
            mesh.to_physical(-1, 0.0)

    def test_chain_rule_scaling(self):
        # physical derivative of a mapped polynomial is (2/h) times the
        # reference derivative, checked against finite differences in x
        rng = np.random.default_rng(9)
        mesh = uniform_mesh(0.0, 1.0, 4)
        c = rng.uniform(-1, 1, 6)
        l, h = 2, mesh.width(2)
        for xi in (-0.5, 0.0, 0.7):
            x = mesh.to_physical(l, xi)
            dref = np.polynomial.legendre.legval(xi, np.polynomial.legendre.legder(c))
            step = 1e-6
            fd = (np.polynomial.legendre.legval(mesh.to_reference(l, x + step), c)
                  - np.polynomial.legendre.legval(mesh.to_reference(l, x - step), c)) / (2 * step)
            assert fd == pytest.approx((2.0 / h) * dref, rel=1e-6, abs=1e-6)

    def test_locate_tie_breaks_left(self):
        mesh = uniform_mesh(0.0, 1.0, 4)
        np.testing.assert_array_equal(mesh.locate([0.0, 0.25, 0.5, 1.0]), [0, 0, 1, 3])
        with pytest.raises(ValueError):
            mesh.locate(1.5)
