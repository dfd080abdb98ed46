"""Weighted inner products, the viscous stress bilinear form and the
advection trilinear form.

All integrals use the spectral trapezoid rule; derivatives are spectral.
`h1_seminorm_b` and the u = v diagonal of the forms return squared
quantities, matching the conventions |u|_b^2 and ||u||_b^2.
"""

from __future__ import annotations

import numpy as np

from .fields import CoefficientFields, VelocityField
from .grid import require_same_grid


def inner_b(u: VelocityField, v: VelocityField, fields: CoefficientFields) -> float:
    """(u, v)_b = integral of b u.v over the torus."""
    require_same_grid(u.grid, v.grid, fields.grid)
    return u.grid.integrate(fields.b * np.sum(u.values * v.values, axis=0))


def h1_seminorm_b(u: VelocityField, fields: CoefficientFields) -> float:
    """||u||_b^2 = integral of b |grad u|^2 (squared weighted H1 seminorm)."""
    require_same_grid(u.grid, fields.grid)
    g = u.grid.vector_grad(u.values)
    return u.grid.integrate(fields.b * np.sum(g * g, axis=(0, 1)))


def _stress_components(grid, u: np.ndarray):
    # S(u) = grad u + (grad u)^T - I div u is trace-free symmetric in 2D:
    # S = [[s1, s2], [s2, -s1]] with the two independent entries below.
    g = grid.vector_grad(u)
    s1 = g[0, 0] - g[1, 1]
    s2 = g[0, 1] + g[1, 0]
    return s1, s2


def stress_form(u: VelocityField, v: VelocityField, fields: CoefficientFields) -> float:
    """[u, v]_{b nu} = integral of b nu S(u):S(v), S = grad u + grad u^T - I div u.

    Boundary friction term absent: it vanishes identically on the torus.
    """
    require_same_grid(u.grid, v.grid, fields.grid)
    s1u, s2u = _stress_components(u.grid, u.values)
    s1v, s2v = _stress_components(v.grid, v.values)
    return u.grid.integrate(fields.b * fields.nu * 2.0 * (s1u * s1v + s2u * s2v))


def trilinear_b(
    u: VelocityField, w: VelocityField, v: VelocityField, fields: CoefficientFields
) -> float:
    """(u, w, v)_b = integral of b (u . grad w) . v."""
    require_same_grid(u.grid, w.grid, v.grid, fields.grid)
    g = w.grid.vector_grad(w.values)
    adv = np.einsum("jxy,ijxy->ixy", u.values, g)
    return u.grid.integrate(fields.b * np.sum(adv * v.values, axis=0))


def advection_field(grid, u: np.ndarray) -> np.ndarray:
    """(u . grad) u as a pointwise field, shared by the Galerkin right-hand side."""
    g = grid.vector_grad(u)
    return np.einsum("jxy,ijxy->ixy", u, g)
