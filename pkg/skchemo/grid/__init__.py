"""This module defines the rectangular grid, the fields stored on it and the
difference operators acting on them.

Scalars (density, signal, pressure) are cell-centered
:class:`~skchemo.grid.ScalarField` objects and the velocity is a
face-centered :class:`~skchemo.grid.VectorField`:

>>> from skchemo.grid import Grid, ScalarField, laplacian
>>> grid = Grid.init_square(16)
>>> grid
Rectangular grid with 16 x 16 cells on [0, 1.0] x [0, 1.0].
>>> float(abs(laplacian(ScalarField.constant(grid, 7.)).values).max())
0.0

"""

from .grid import Grid
from .fields import ScalarField, VectorField, check_grid
from .operators import (laplacian, gradient, divergence, advect,
                        chemotaxis_flux_div, gradient_squared, curl)


__all__ = [
    'Grid',
    'ScalarField',
    'VectorField',
    'check_grid',
    'laplacian',
    'gradient',
    'divergence',
    'advect',
    'chemotaxis_flux_div',
    'gradient_squared',
    'curl',
]
