"""Partition of the physical domain and the affine element maps.

Element l (0-based) spans (x_l, x_{l+1}); the map from the reference
interval [-1, 1] is x = (1-xi)/2 * x_l + (1+xi)/2 * x_{l+1} with Jacobian
dx/dxi = h_l / 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Mesh", "uniform_mesh", "mesh_from_breakpoints"]


@dataclass(frozen=True, eq=False)
class Mesh:
    """Ordered breakpoints of (a, b); immutable after construction."""

    breakpoints: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(self.breakpoints, dtype=float)
        if pts.ndim != 1 or len(pts) < 2:
            raise ValueError("a mesh needs at least two breakpoints")
        if np.any(np.diff(pts) <= 0.0):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", pts)

    @property
    def a(self) -> float:
        return float(self.breakpoints[0])

    @property
    def b(self) -> float:
        return float(self.breakpoints[-1])

    @property
    def N(self) -> int:
        """Number of elements."""
        return len(self.breakpoints) - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def _check_index(self, l: int):
        if not 0 <= l < self.N:
            raise IndexError(f"element index {l} out of range [0, {self.N})")

    def width(self, l: int) -> float:
        self._check_index(l)
        return float(self.breakpoints[l + 1] - self.breakpoints[l])

    def jacobian(self, l: int) -> float:
        """dx/dxi on element l, i.e. h_l / 2."""
        return self.width(l) / 2.0

    def to_physical(self, l: int, xi):
        """Map reference coordinates xi in [-1, 1] to element l."""
        self._check_index(l)
        xi = np.asarray(xi, dtype=float)
        lo = self.breakpoints[l]
        hi = self.breakpoints[l + 1]
        return (1.0 - xi) / 2.0 * lo + (1.0 + xi) / 2.0 * hi

    def to_reference(self, l: int, x):
        """Inverse of `to_physical` on element l."""
        self._check_index(l)
        x = np.asarray(x, dtype=float)
        lo = self.breakpoints[l]
        hi = self.breakpoints[l + 1]
        return (2.0 * x - (lo + hi)) / (hi - lo)

    def locate(self, x) -> np.ndarray:
        """Element index for each point of [a, b].

        Points that fall exactly on an interior breakpoint belong to the
        left element.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if np.any(x < self.a) or np.any(x > self.b):
            raise ValueError("point outside the mesh domain")
        idx = np.searchsorted(self.breakpoints, x, side="left") - 1
        return np.clip(idx, 0, self.N - 1)


def uniform_mesh(a: float, b: float, N: int) -> Mesh:
    """Mesh of N equal-width elements over (a, b)."""
    if not a < b:
        raise ValueError("domain must satisfy a < b")
    if N < 1:
        raise ValueError("need at least one element")
    return Mesh(np.linspace(a, b, N + 1))


def mesh_from_breakpoints(points) -> Mesh:
    """General, possibly non-uniform mesh from explicit breakpoints."""
    return Mesh(np.asarray(points, dtype=float))
