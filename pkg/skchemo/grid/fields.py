from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np
from numpy import ndarray

from .grid import Grid


SCALAR_BCS = ('neumann', 'dirichlet')
VECTOR_BCS = ('noslip', 'none')


def check_grid(*fields) -> Grid:
    """Return the common grid of the given fields."""
    grid = fields[0].grid
    for field in fields[1:]:
        if field.grid != grid:
            raise ValueError("Grid mismatch: {} vs. {}".format(grid,
                                                               field.grid))
    return grid


def _as_array(values, shape: Tuple[int, int], name: str) -> ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.size != shape[0] * shape[1]:
        raise ValueError("Expected {} values for {}, got {}."
                         .format(shape[0] * shape[1], name, arr.size))
    arr = np.ascontiguousarray(arr.reshape(shape))
    if not np.all(np.isfinite(arr)):
        raise ValueError("Non-finite values in {}.".format(name))
    return arr


@dataclass(repr=False)
class ScalarField:
    """Cell-centered scalar with a boundary condition tag.

    The tag decides the ghost extension used by the difference operators:
    mirror for ``'neumann'`` and negation for ``'dirichlet'``.

    """

    grid: Grid
    values: ndarray
    bc: str = 'neumann'

    def __post_init__(self):
        if self.bc not in SCALAR_BCS:
            raise ValueError("Unknown boundary condition '{}'."
                             .format(self.bc))
        self.values = _as_array(self.values, self.grid.shape, 'values')

    def __array__(self, dtype=None, copy=None):
        if dtype is None and not copy:
            return self.values
        return self.values.astype(dtype or self.values.dtype)

    @classmethod
    def constant(cls, grid: Grid, value: float, bc: str = 'neumann'):
        return cls(grid, np.full(grid.shape, float(value)), bc)

    def with_values(self, values: ndarray) -> 'ScalarField':
        return replace(self, values=values)

    def copy(self) -> 'ScalarField':
        return replace(self, values=self.values.copy())

    def integral(self) -> float:
        """Midpoint rule."""
        return float(np.sum(self.values) * self.grid.cell_area)

    def max(self) -> float:
        return float(np.max(self.values))

    def min(self) -> float:
        return float(np.min(self.values))

    def __repr__(self):
        return "ScalarField({}, bc='{}', range=[{:.6g}, {:.6g}])".format(
            self.grid, self.bc, self.min(), self.max())


@dataclass(repr=False)
class VectorField:
    """Face-centered velocity on the MAC layout.

    ``u1`` has shape ``(nx + 1, ny)`` and ``u2`` shape ``(nx, ny + 1)``.
    With ``bc='noslip'`` the boundary faces are zero.

    """

    grid: Grid
    u1: ndarray
    u2: ndarray
    bc: str = 'noslip'

    def __post_init__(self):
        if self.bc not in VECTOR_BCS:
            raise ValueError("Unknown boundary condition '{}'."
                             .format(self.bc))
        nx, ny = self.grid.shape
        self.u1 = _as_array(self.u1, (nx + 1, ny), 'u1')
        self.u2 = _as_array(self.u2, (nx, ny + 1), 'u2')
        if self.bc == 'noslip':
            self.u1[[0, -1], :] = 0.
            self.u2[:, [0, -1]] = 0.

    @classmethod
    def zeros(cls, grid: Grid, bc: str = 'noslip'):
        nx, ny = grid.shape
        return cls(grid, np.zeros((nx + 1, ny)), np.zeros((nx, ny + 1)), bc)

    def copy(self) -> 'VectorField':
        return replace(self, u1=self.u1.copy(), u2=self.u2.copy())

    def with_noslip(self) -> 'VectorField':
        """Return a copy with the boundary faces set to zero."""
        return VectorField(self.grid, self.u1.copy(), self.u2.copy(),
                           'noslip')

    def cell_centered(self) -> Tuple[ndarray, ndarray]:
        """Average the face components to the cell centers."""
        return (.5 * (self.u1[:-1] + self.u1[1:]),
                .5 * (self.u2[:, :-1] + self.u2[:, 1:]))

    def boundary_max(self) -> float:
        return float(max(np.max(np.abs(self.u1[[0, -1], :])),
                         np.max(np.abs(self.u2[:, [0, -1]]))))

    def max_abs(self) -> Tuple[float, float]:
        return float(np.max(np.abs(self.u1))), float(np.max(np.abs(self.u2)))

    def __repr__(self):
        return "VectorField({}, bc='{}', max=({:.6g}, {:.6g}))".format(
            self.grid, self.bc, *self.max_abs())
