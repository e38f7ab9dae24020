from dataclasses import dataclass
from typing import Tuple, Type

import numpy as np
from numpy import ndarray


@dataclass(frozen=True, repr=False)
class Grid:
    """A uniform cell-centered grid on the rectangle [0, lx] x [0, ly].

    Scalars live at the cell centers and velocity components on the cell
    faces (MAC staggering)::

        +---u2---+
        |        |
        u1   n   u1
        |        |
        +---u2---+

    The grid is immutable and hashable so that assembled difference operators
    can be cached per grid.

    """

    nx: int  #: Number of cells in the x-direction
    ny: int  #: Number of cells in the y-direction
    lx: float = 1.  #: Side length in the x-direction
    ly: float = 1.  #: Side length in the y-direction

    def __post_init__(self):
        if int(self.nx) != self.nx or int(self.ny) != self.ny:
            raise ValueError("Cell counts must be integers.")
        object.__setattr__(self, 'nx', int(self.nx))
        object.__setattr__(self, 'ny', int(self.ny))
        object.__setattr__(self, 'lx', float(self.lx))
        object.__setattr__(self, 'ly', float(self.ly))
        if self.nx < 8 or self.ny < 8:
            raise ValueError("At least 8 cells per direction are required, "
                             "got {} x {}.".format(self.nx, self.ny))
        if not (np.isfinite(self.lx) and np.isfinite(self.ly)
                and self.lx > 0 and self.ly > 0):
            raise ValueError("Side lengths must be positive and finite.")

    @classmethod
    def init_square(cls: Type, n: int, length: float = 1.):
        """Initialize an n x n grid on the square [0, length]^2."""
        return cls(n, n, length, length)

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def area(self) -> float:
        return self.lx * self.ly

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def shape(self) -> Tuple[int, int]:
        return self.nx, self.ny

    @property
    def ncells(self) -> int:
        return self.nx * self.ny

    def cell_centers(self) -> Tuple[ndarray, ndarray]:
        """Return the coordinates of the cell centers, shape (nx, ny)."""
        x = (np.arange(self.nx) + .5) * self.dx
        y = (np.arange(self.ny) + .5) * self.dy
        return np.meshgrid(x, y, indexing='ij')

    def x_faces(self) -> Tuple[ndarray, ndarray]:
        """Return the midpoints of the faces normal to x, (nx + 1, ny)."""
        x = np.arange(self.nx + 1) * self.dx
        y = (np.arange(self.ny) + .5) * self.dy
        return np.meshgrid(x, y, indexing='ij')

    def y_faces(self) -> Tuple[ndarray, ndarray]:
        """Return the midpoints of the faces normal to y, (nx, ny + 1)."""
        x = (np.arange(self.nx) + .5) * self.dx
        y = np.arange(self.ny + 1) * self.dy
        return np.meshgrid(x, y, indexing='ij')

    def nodes(self) -> Tuple[ndarray, ndarray]:
        """Return the cell corner coordinates, shape (nx + 1, ny + 1)."""
        x = np.arange(self.nx + 1) * self.dx
        y = np.arange(self.ny + 1) * self.dy
        return np.meshgrid(x, y, indexing='ij')

    def quads(self) -> Tuple[ndarray, ndarray]:
        """Return node coordinates (N x 2) and cell connectivity (ncells x 4).

        The cells are numbered in the same order as the flattened cell
        arrays and the corners counterclockwise::

            3---2
            |   |
            0---1

        """
        X, Y = self.nodes()
        p = np.vstack((X.flatten(), Y.flatten())).T
        ix = np.arange((self.nx + 1) * (self.ny + 1)).reshape(self.nx + 1,
                                                               self.ny + 1)
        t = np.vstack((
            ix[:-1, :-1].flatten(),
            ix[1:, :-1].flatten(),
            ix[1:, 1:].flatten(),
            ix[:-1, 1:].flatten(),
        )).T
        return p, t

    def __repr__(self):
        return "Rectangular grid with {} x {} cells on [0, {}] x [0, {}]."\
            .format(self.nx, self.ny, self.lx, self.ly)

    def __str__(self):
        return self.__repr__()
