from unittest import TestCase

import numpy as np
import pytest
from numpy.testing import assert_array_equal, assert_almost_equal

from skchemo.grid import Grid, ScalarField, VectorField, check_grid


class GridProperties(TestCase):

    def runTest(self):
        grid = Grid(16, 8, 2., 1.)
        self.assertEqual(grid.shape, (16, 8))
        self.assertEqual(grid.ncells, 128)
        self.assertAlmostEqual(grid.dx, .125)
        self.assertAlmostEqual(grid.dy, .125)
        self.assertAlmostEqual(grid.area, 2.)
        self.assertAlmostEqual(grid.cell_area * grid.ncells, grid.area)

        X, Y = grid.cell_centers()
        self.assertEqual(X.shape, (16, 8))
        self.assertAlmostEqual(X[0, 0], .0625)
        self.assertAlmostEqual(Y[0, -1], 1. - .0625)
        self.assertEqual(grid.x_faces()[0].shape, (17, 8))
        self.assertEqual(grid.y_faces()[0].shape, (16, 9))
        self.assertEqual(grid.nodes()[0].shape, (17, 9))


class GridHashable(TestCase):

    def runTest(self):
        self.assertEqual(Grid(8, 8), Grid.init_square(8))
        self.assertEqual(hash(Grid(8, 8)), hash(Grid(8, 8, 1., 1.)))
        self.assertNotEqual(Grid(8, 8), Grid(8, 8, 2., 2.))
        self.assertEqual(len({Grid(8, 8), Grid.init_square(8, 1.)}), 1)


@pytest.mark.parametrize(
    "args",
    [
        (4, 8),
        (8, 7),
        (8, 8, 0., 1.),
        (8, 8, 1., -1.),
        (8, 8, np.inf, 1.),
        (8.5, 8),
    ]
)
def test_invalid_grid(args):
    with pytest.raises(ValueError):
        Grid(*args)


class GridQuads(TestCase):

    def runTest(self):
        grid = Grid(8, 10, 1., 2.)
        p, t = grid.quads()
        self.assertEqual(p.shape, (9 * 11, 2))
        self.assertEqual(t.shape, (80, 4))
        # counterclockwise corners, positive signed area
        x, y = p[t, 0], p[t, 1]
        area = .5 * np.sum(x * np.roll(y, -1, axis=1)
                           - np.roll(x, -1, axis=1) * y, axis=1)
        assert_almost_equal(area, grid.cell_area)
        # cell k is the cell of the flattened arrays
        X, Y = grid.cell_centers()
        assert_almost_equal(p[t].mean(axis=1)[:, 0], X.ravel())
        assert_almost_equal(p[t].mean(axis=1)[:, 1], Y.ravel())


class ScalarFieldBasics(TestCase):

    def runTest(self):
        grid = Grid.init_square(8)
        f = ScalarField.constant(grid, 3.)
        self.assertAlmostEqual(f.integral(), 3.)
        self.assertEqual(f.bc, 'neumann')
        g = f.copy()
        g.values[0, 0] = 1.
        self.assertEqual(f.values[0, 0], 3.)
        self.assertEqual(g.min(), 1.)
        # flat input is reshaped
        h = ScalarField(grid, np.arange(64.))
        self.assertEqual(h.values.shape, (8, 8))
        self.assertEqual(h.values[1, 0], 8.)
        assert_array_equal(np.asarray(h), h.values)


@pytest.mark.parametrize(
    "values,bc",
    [
        (np.zeros(63), 'neumann'),
        (np.full(64, np.nan), 'neumann'),
        (np.zeros(64), 'periodic'),
    ]
)
def test_invalid_scalar_field(values, bc):
    with pytest.raises(ValueError):
        ScalarField(Grid.init_square(8), values, bc)


class VectorFieldNoSlip(TestCase):

    def runTest(self):
        grid = Grid(8, 9)
        u1 = np.ones((9, 9))
        u2 = np.ones((8, 10))
        free = VectorField(grid, u1, u2, 'none')
        self.assertEqual(free.boundary_max(), 1.)
        wall = free.with_noslip()
        self.assertEqual(wall.boundary_max(), 0.)
        self.assertEqual(free.boundary_max(), 1.)
        self.assertEqual(wall.max_abs(), (1., 1.))

        U1, U2 = wall.cell_centered()
        self.assertEqual(U1.shape, (8, 9))
        assert_almost_equal(U1[0], .5)
        assert_almost_equal(U1[1:-1], 1.)

        zero = VectorField.zeros(grid)
        self.assertEqual(zero.max_abs(), (0., 0.))


class GridMismatch(TestCase):

    def runTest(self):
        f = ScalarField.constant(Grid.init_square(8), 1.)
        g = ScalarField.constant(Grid.init_square(16), 1.)
        self.assertEqual(check_grid(f, f.copy()), f.grid)
        with self.assertRaises(ValueError):
            check_grid(f, g)
