import unittest
from dataclasses import replace

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_almost_equal

from skchemo.errors import SolverError
from skchemo.grid import (Grid, ScalarField, VectorField, curl, divergence,
                          gradient)
from skchemo.models.chemo import InitialData, SimParams, init_state
from skchemo.models.fluid import (FluidConfig, convection, dissipation,
                                  fluid_energy_diagnostics,
                                  hydrostatic_pressure, kinetic_energy,
                                  project, step_fluid)
from skchemo.oracles import fit_decay


def _random_field(n, seed=0):
    grid = Grid.init_square(n)
    rng = np.random.default_rng(seed)
    return VectorField(grid,
                       rng.standard_normal((n + 1, n)),
                       rng.standard_normal((n, n + 1)))


@pytest.mark.parametrize("seed", [0, 1])
def test_projection_removes_divergence(seed):
    v = _random_field(32, seed)
    out, q = project(v)
    ratio = (np.max(np.abs(divergence(out).values))
             / np.max(np.abs(divergence(v).values)))
    assert ratio <= 1e-10
    assert out.boundary_max() == 0.
    assert abs(np.mean(q.values)) < 1e-12


class ProjectionIdentity(unittest.TestCase):
    """v = project(v) + grad q."""

    def runTest(self):
        v = _random_field(16, 3)
        out, q = project(v)
        g = gradient(q)
        assert_allclose(out.u1 + g.u1, v.u1, atol=1e-12)
        assert_allclose(out.u2 + g.u2, v.u2, atol=1e-12)
        # projecting twice changes nothing
        again, _ = project(out)
        assert_allclose(again.u1, out.u1, atol=1e-8)


class ProjectionAnnihilatesGradients(unittest.TestCase):

    def runTest(self):
        grid = Grid.init_square(32)
        X, Y = grid.cell_centers()
        f = ScalarField(grid, np.cos(np.pi * X) * np.cos(2. * np.pi * Y))
        out, q = project(gradient(f))
        self.assertLess(max(out.max_abs()), 1e-6)
        assert_allclose(q.values, f.values - np.mean(f.values), atol=1e-6)


class ProjectionKeepsSolenoidal(unittest.TestCase):

    def runTest(self):
        grid = Grid(16, 24, 1., 1.5)
        Xn, Yn = grid.nodes()
        psi = np.sin(np.pi * Xn) ** 2 * np.sin(np.pi * Yn / 1.5) ** 2
        v = curl(psi, grid).with_noslip()
        out, q = project(v)
        assert_almost_equal(out.u1, v.u1)
        assert_almost_equal(out.u2, v.u2)


class ProjectionNotConverged(unittest.TestCase):

    def runTest(self):
        v = _random_field(32)
        with self.assertRaises(SolverError) as ctx:
            project(v, FluidConfig(poisson_max_iter=1))
        self.assertGreater(ctx.exception.residual, ctx.exception.tolerance)


@pytest.mark.parametrize(
    "kwargs",
    [
        {'poisson_tol': 0.},
        {'poisson_tol': 1e-3},
        {'poisson_max_iter': 0},
        {'gravity': (0., np.nan)},
        {'gravity': (1., 2., 3.)},
    ]
)
def test_invalid_fluid_config(kwargs):
    with pytest.raises(ValueError):
        FluidConfig(**kwargs)


def _params(grid, preset='uniform', gravity=(0., 0.), **kwargs):
    return SimParams(grid,
                     fluid=FluidConfig(gravity=gravity, **kwargs),
                     init=InitialData(preset, n_base=2.))


class RestStateHydrostatic(unittest.TestCase):
    """Uniform density under gravity stays at rest with dp/dy = n."""

    def runTest(self):
        grid = Grid(16, 16, 1., 2.)
        params = _params(grid, gravity=(0., -1.))
        state = init_state(params)
        u, p = step_fluid(state, params, .01)
        self.assertEqual(max(u.max_abs()), 0.)
        assert_allclose(np.diff(p.values, axis=1) / grid.dy, 2.)
        assert_allclose(np.diff(p.values, axis=0), 0., atol=1e-12)
        self.assertAlmostEqual(np.mean(p.values), 0.)


class HydrostaticPressure(unittest.TestCase):

    def runTest(self):
        grid = Grid.init_square(8)
        n = ScalarField.constant(grid, 3.)
        P = hydrostatic_pressure(n, (1., 0.))
        assert_allclose(np.diff(P, axis=0) / grid.dx, -3.)
        self.assertAlmostEqual(np.mean(P), 0.)


class ConvectionOfRest(unittest.TestCase):

    def runTest(self):
        grid = Grid(8, 10)
        c1, c2 = convection(VectorField.zeros(grid))
        self.assertEqual(c1.shape, (7, 10))
        self.assertEqual(c2.shape, (8, 9))
        self.assertEqual(np.max(np.abs(c1)), 0.)


class KineticEnergyUniformFlow(unittest.TestCase):

    def runTest(self):
        grid = Grid(8, 16, 2., 1.)
        nx, ny = grid.shape
        v = VectorField(grid, np.full((nx + 1, ny), 3.),
                        np.zeros((nx, ny + 1)), 'none')
        self.assertAlmostEqual(kinetic_energy(v), 9. * grid.area)
        self.assertEqual(dissipation(VectorField.zeros(grid)), 0.)


class FluidEnergyDiagnostics(unittest.TestCase):

    def runTest(self):
        grid = Grid.init_square(16)
        state = init_state(_params(grid))
        self.assertEqual(fluid_energy_diagnostics(state), (0., 0.))
        state = init_state(SimParams(grid, init=InitialData('vortex-fluid')))
        energy_u, dissipation_u = fluid_energy_diagnostics(state)
        self.assertAlmostEqual(energy_u, kinetic_energy(state.u))
        self.assertGreater(energy_u, 0.)
        self.assertAlmostEqual(dissipation_u, dissipation(state.u))
        self.assertGreater(dissipation_u, 0.)


class StokesDecay(unittest.TestCase):
    """Unforced flow decays at the first Stokes eigenvalue."""

    n = 32
    dt = 5e-4
    eigenvalue = 52.3447

    def runTest(self):
        grid = Grid.init_square(self.n)
        params = replace(_params(grid), init=InitialData('vortex-fluid'))
        state = init_state(params)
        energies = [kinetic_energy(state.u)]
        times = [0.]
        for k in range(int(round(.15 / self.dt))):
            u, p = step_fluid(state, params, self.dt)
            self.assertLessEqual(kinetic_energy(u), energies[-1])
            self.assertGreater(dissipation(u), 0.)
            state = replace(state, u=u, p=p, t=state.t + self.dt)
            energies.append(kinetic_energy(u))
            times.append(state.t)

        fit = fit_decay(times, energies, 'exp', (.05, .15))
        expected = 2. * np.log1p(self.eigenvalue * self.dt) / self.dt
        self.assertLess(abs(fit.rate / expected - 1.), .1,
                        msg='observed rate {}'.format(fit.rate))
        self.assertGreater(fit.r_squared, .99)


class ConvectionKeepsNoSlip(unittest.TestCase):

    def runTest(self):
        grid = Grid.init_square(16)
        params = replace(_params(grid, include_convection=True),
                         init=InitialData('vortex-fluid'))
        state = init_state(params)
        u, _ = step_fluid(state, params, 1e-3)
        self.assertEqual(u.boundary_max(), 0.)
        self.assertLess(np.max(np.abs(divergence(u).values)),
                        1e-8 * np.max(np.abs(u.u1)) / grid.dx)


class NonpositiveTimeStep(unittest.TestCase):

    def runTest(self):
        params = _params(Grid.init_square(8))
        with self.assertRaises(ValueError):
            step_fluid(init_state(params), params, 0.)


if __name__ == '__main__':
    unittest.main()
