"""Assembled difference operators of the Poisson equation.

The five-point Laplacian is built from one-dimensional second differences
with a single ghost layer per boundary.  The ghost value is written as
``ghost * f[boundary]`` with

- ``+1`` mirror, homogeneous Neumann at a cell-centered boundary,
- ``-1`` negation, homogeneous Dirichlet at a cell-centered boundary,
- ``0``, homogeneous Dirichlet when the unknowns end one spacing before the
  boundary (face-centered velocity normal to the wall).

"""

from functools import lru_cache
from typing import Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse import spmatrix

from skchemo.grid.grid import Grid


#: Weights (west, centre, east) of the one-dimensional second difference.
SECOND_DIFFERENCE = (1., -2., 1.)

GHOST = {
    'neumann': 1.,
    'dirichlet': -1.,
    'interior': 0.,
}


def second_difference(n: int, h: float, ghost: float) -> spmatrix:
    """One-dimensional second difference matrix divided by h^2."""
    west, centre, east = SECOND_DIFFERENCE
    diag = np.full(n, centre)
    diag[0] += ghost * west
    diag[-1] += ghost * east
    return sp.diags([np.full(n - 1, west), diag, np.full(n - 1, east)],
                    [-1, 0, 1], format='csr') / h ** 2


@lru_cache(maxsize=32)
def laplace(grid: Grid, bc: str = 'neumann') -> spmatrix:
    """Five-point Laplacian acting on flattened cell arrays."""
    ghost = GHOST[bc]
    Lx = second_difference(grid.nx, grid.dx, ghost)
    Ly = second_difference(grid.ny, grid.dy, ghost)
    return (sp.kron(Lx, sp.identity(grid.ny))
            + sp.kron(sp.identity(grid.nx), Ly)).tocsr()


@lru_cache(maxsize=32)
def vector_laplace(grid: Grid) -> Tuple[spmatrix, spmatrix]:
    """Laplacians of the interior face velocities under no-slip.

    The first matrix acts on ``u1[1:-1, :]`` flattened, the second on
    ``u2[:, 1:-1]``.

    """
    nx, ny = grid.shape
    L1 = (sp.kron(second_difference(nx - 1, grid.dx, GHOST['interior']),
                  sp.identity(ny))
          + sp.kron(sp.identity(nx - 1),
                    second_difference(ny, grid.dy, GHOST['dirichlet'])))
    L2 = (sp.kron(second_difference(nx, grid.dx, GHOST['dirichlet']),
                  sp.identity(ny - 1))
          + sp.kron(sp.identity(nx),
                    second_difference(ny - 1, grid.dy, GHOST['interior'])))
    return L1.tocsr(), L2.tocsr()


def mass(n: int) -> spmatrix:
    return sp.identity(n, format='csr')


def clear_cache():
    """Drop the assembled operators, e.g. after changing the stencil."""
    laplace.cache_clear()
    vector_laplace.cache_clear()
