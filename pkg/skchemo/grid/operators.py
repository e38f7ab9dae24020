"""Second-order difference operators on the MAC grid.

Scalars are cell-centered and vectors face-centered.  The discrete gradient
maps cells to faces and the discrete divergence faces to cells; together they
reproduce :func:`laplacian` exactly (summation by parts), so that the
projection of :mod:`skchemo.models.fluid` is exact up to solver tolerance.

"""

import numpy as np
from numpy import ndarray

from ..models import poisson
from .fields import ScalarField, VectorField, check_grid
from .grid import Grid


def _pad(values: ndarray, axis: int, bc: str) -> ndarray:
    """Add one ghost layer on both ends of the given axis."""
    width = [(0, 0), (0, 0)]
    width[axis] = (1, 1)
    padded = np.pad(values, width, mode='edge')
    if bc == 'dirichlet':
        index = [slice(None), slice(None)]
        for ghost in (0, -1):
            index[axis] = ghost
            padded[tuple(index)] *= -1.
    return padded


def laplacian(f: ScalarField) -> ScalarField:
    """Five-point Laplacian with ghost cells consistent with ``f.bc``."""
    L = poisson.laplace(f.grid, f.bc)
    return ScalarField(f.grid, (L @ f.values.ravel()).reshape(f.grid.shape),
                       f.bc)


def gradient(f: ScalarField) -> VectorField:
    """Face-centered gradient.

    For Neumann fields the boundary faces vanish and the result is a valid
    no-slip vector field.

    """
    grid = f.grid
    g1 = np.diff(_pad(f.values, 0, f.bc), axis=0) / grid.dx
    g2 = np.diff(_pad(f.values, 1, f.bc), axis=1) / grid.dy
    if f.bc == 'neumann':
        return VectorField(grid, g1, g2, 'noslip')
    return VectorField(grid, g1, g2, 'none')


def divergence(v: VectorField) -> ScalarField:
    """Cell-centered divergence of a face-centered field."""
    grid = v.grid
    return ScalarField(grid,
                       np.diff(v.u1, axis=0) / grid.dx
                       + np.diff(v.u2, axis=1) / grid.dy)


def _upwind_flux_div(grid: Grid,
                     f: ndarray,
                     a1: ndarray,
                     a2: ndarray,
                     s1: ndarray,
                     s2: ndarray) -> ndarray:
    """Divergence of the face fluxes a * f_upwind.

    The face value of ``f`` is taken from the lower neighbour where the
    selector ``s`` is positive and from the upper neighbour otherwise.

    """
    f1 = _pad(f, 0, 'neumann')
    f2 = _pad(f, 1, 'neumann')
    F1 = a1 * np.where(s1 > 0, f1[:-1], f1[1:])
    F2 = a2 * np.where(s2 > 0, f2[:, :-1], f2[:, 1:])
    return np.diff(F1, axis=0) / grid.dx + np.diff(F2, axis=1) / grid.dy


def advect(f: ScalarField, v: VectorField) -> ScalarField:
    """Conservative first-order upwind transport term div(f v).

    Equals ``v . grad f`` for solenoidal ``v``; the face value of ``f`` is
    taken upstream with respect to the sign of the face velocity.

    """
    grid = check_grid(f, v)
    return ScalarField(grid, _upwind_flux_div(grid, f.values,
                                              v.u1, v.u2, v.u1, v.u2), f.bc)


def chemotaxis_flux_div(n: ScalarField,
                        w: ScalarField,
                        chi: float) -> ScalarField:
    """Flux form of chi * div(n grad w).

    The population drifts with velocity ``-chi grad w``; the face value of
    ``n`` is taken upstream of that drift.  Boundary fluxes vanish, hence the
    cell sum of the result is zero.

    """
    grid = check_grid(n, w)
    if np.any(n.values < 0.):
        raise ValueError("The chemotaxis flux requires n >= 0, min n = {}."
                         .format(n.min()))
    g = gradient(w)
    drift1, drift2 = -g.u1, -g.u2
    return ScalarField(grid, chi * _upwind_flux_div(grid, n.values,
                                                    g.u1, g.u2,
                                                    drift1, drift2))


def gradient_squared(f: ScalarField) -> ScalarField:
    """Cell average of the squared face gradients.

    Sums to the discrete Dirichlet energy: ``gradient_squared(f).integral()``
    equals ``-(f, laplacian(f))`` for Neumann fields.

    """
    g = gradient(f)
    return ScalarField(f.grid,
                       .5 * (g.u1[:-1] ** 2 + g.u1[1:] ** 2)
                       + .5 * (g.u2[:, :-1] ** 2 + g.u2[:, 1:] ** 2))


def curl(psi: ndarray, grid: Grid) -> VectorField:
    """Velocity (d psi/dy, -d psi/dx) of a stream function at the nodes.

    ``psi`` has shape ``(nx + 1, ny + 1)``.  The result is discretely
    solenoidal and its boundary faces vanish if ``psi`` vanishes on the
    boundary.

    """
    psi = np.asarray(psi, dtype=np.float64)
    if psi.shape != (grid.nx + 1, grid.ny + 1):
        raise ValueError("Stream function must be given at the grid nodes.")
    u1 = np.diff(psi, axis=1) / grid.dy
    u2 = -np.diff(psi, axis=0) / grid.dx
    return VectorField(grid, u1, u2, 'none')
