import unittest

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_almost_equal

from skchemo.grid import (Grid, ScalarField, VectorField, advect,
                          chemotaxis_flux_div, curl, divergence, gradient,
                          gradient_squared, laplacian)


def _cosines(grid):
    X, Y = grid.cell_centers()
    return ScalarField(grid, np.cos(np.pi * X) * np.cos(np.pi * Y))


class ConvergenceLaplacian(unittest.TestCase):
    """Order of the five-point Laplacian on a Neumann eigenfunction."""

    rate = 2.0
    eps = 0.1
    sizes = (16, 32, 64)

    def error(self, grid):
        f = _cosines(grid)
        return np.max(np.abs(laplacian(f).values
                             + 2. * np.pi ** 2 * f.values))

    def runTest(self):
        hs, errors = [], []
        for n in self.sizes:
            grid = Grid.init_square(n)
            hs.append(grid.dx)
            errors.append(self.error(grid))
        rate = np.polyfit(np.log(hs), np.log(errors), 1)[0]
        self.assertLess(np.abs(rate - self.rate), self.eps,
                        msg='observed rate {}'.format(rate))


class ConvergenceGradient(ConvergenceLaplacian):

    def error(self, grid):
        g = gradient(_cosines(grid))
        X1, Y1 = grid.x_faces()
        X2, Y2 = grid.y_faces()
        return max(
            np.max(np.abs(g.u1 + np.pi * np.sin(np.pi * X1)
                          * np.cos(np.pi * Y1))),
            np.max(np.abs(g.u2 + np.pi * np.cos(np.pi * X2)
                          * np.sin(np.pi * Y2))))


class ConvergenceDivergence(ConvergenceLaplacian):

    def error(self, grid):
        X, Y = grid.cell_centers()
        X1, Y1 = grid.x_faces()
        X2, Y2 = grid.y_faces()
        v = VectorField(grid,
                        np.sin(np.pi * X1) * np.cos(np.pi * Y1),
                        np.cos(np.pi * X2) * np.sin(np.pi * Y2), 'none')
        return np.max(np.abs(divergence(v).values
                             - 2. * np.pi * np.cos(np.pi * X)
                             * np.cos(np.pi * Y)))


class ConvergenceRectangle(ConvergenceLaplacian):

    def error(self, grid):
        grid = Grid(grid.nx, grid.ny, 2., 1.)
        X, Y = grid.cell_centers()
        f = ScalarField(grid, np.cos(np.pi * X / 2.) * np.cos(np.pi * Y))
        return np.max(np.abs(laplacian(f).values
                             + 1.25 * np.pi ** 2 * f.values))


@pytest.mark.parametrize("bc", ['neumann', 'dirichlet'])
def test_div_grad_is_laplacian(bc):
    grid = Grid(12, 10, 1., .5)
    rng = np.random.default_rng(1)
    f = ScalarField(grid, rng.standard_normal(grid.shape), bc)
    assert_allclose(divergence(gradient(f)).values, laplacian(f).values,
                    rtol=1e-12, atol=1e-9)


class NeumannGradientIsNoSlip(unittest.TestCase):

    def runTest(self):
        grid = Grid.init_square(10)
        f = ScalarField(grid, np.random.default_rng(2).random(grid.shape))
        g = gradient(f)
        self.assertEqual(g.bc, 'noslip')
        self.assertEqual(g.boundary_max(), 0.)
        # the cell sum of a Neumann Laplacian vanishes
        self.assertAlmostEqual(laplacian(f).integral(), 0., places=10)


class GradientSquaredEnergy(unittest.TestCase):

    def runTest(self):
        grid = Grid(16, 12, 1., 1.5)
        f = ScalarField(grid, np.random.default_rng(3).random(grid.shape))
        dirichlet = -np.sum(f.values * laplacian(f).values) * grid.cell_area
        self.assertAlmostEqual(gradient_squared(f).integral() / dirichlet,
                               1., places=12)
        # linear field in x has |grad f|^2 = 1 away from the walls
        X, _ = grid.cell_centers()
        g2 = gradient_squared(ScalarField(grid, X)).values
        assert_almost_equal(g2[1:-1], 1.)
        assert_almost_equal(g2[0], .5)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_flux_forms_conserve_mass(seed):
    grid = Grid(16, 8, 2., 1.)
    rng = np.random.default_rng(seed)
    n = ScalarField(grid, rng.random(grid.shape))
    w = ScalarField(grid, rng.random(grid.shape))
    v = VectorField(grid,
                    rng.standard_normal((17, 8)),
                    rng.standard_normal((16, 9)))
    assert abs(chemotaxis_flux_div(n, w, .7).integral()) < 1e-12
    assert abs(advect(n, v).integral()) < 1e-12


class ChemotaxisUniformDensity(unittest.TestCase):
    """With n = 1 the upwind flux is chi * Laplace w."""

    def runTest(self):
        grid = Grid.init_square(16)
        w = _cosines(grid)
        n = ScalarField.constant(grid, 1.)
        assert_allclose(chemotaxis_flux_div(n, w, .5).values,
                        .5 * laplacian(w).values, atol=1e-10)
        # constant signal, no drift
        n = ScalarField(grid, 1. + .5 * _cosines(grid).values)
        self.assertEqual(np.max(np.abs(chemotaxis_flux_div(
            n, ScalarField.constant(grid, 2.), 1.).values)), 0.)


class ChemotaxisRequiresNonnegative(unittest.TestCase):

    def runTest(self):
        grid = Grid.init_square(8)
        n = ScalarField(grid, -np.ones(grid.shape))
        with self.assertRaises(ValueError):
            chemotaxis_flux_div(n, ScalarField.constant(grid, 0.), 1.)


class AdvectionUpwind(unittest.TestCase):

    def runTest(self):
        grid = Grid.init_square(8)
        # constant field in a solenoidal flow is not transported
        Xn, Yn = grid.nodes()
        psi = np.sin(np.pi * Xn) ** 2 * np.sin(np.pi * Yn) ** 2
        v = curl(psi, grid).with_noslip()
        out = advect(ScalarField.constant(grid, 3.), v).values
        assert_almost_equal(out, 0.)
        # uniform flow in x takes the value from the left neighbour
        u1 = np.ones((9, 8))
        v = VectorField(grid, u1, np.zeros((8, 9)))
        X, _ = grid.cell_centers()
        out = advect(ScalarField(grid, X), v).values
        assert_almost_equal(out[1:-1], 1.)


class CurlIsSolenoidal(unittest.TestCase):

    def runTest(self):
        grid = Grid(12, 16, 1., 2.)
        rng = np.random.default_rng(4)
        psi = rng.standard_normal((13, 17))
        self.assertLess(np.max(np.abs(divergence(curl(psi, grid)).values)),
                        1e-10)
        psi[[0, -1], :] = 0.
        psi[:, [0, -1]] = 0.
        self.assertEqual(curl(psi, grid).boundary_max(), 0.)
        with self.assertRaises(ValueError):
            curl(np.zeros((12, 16)), grid)


if __name__ == '__main__':
    unittest.main()
