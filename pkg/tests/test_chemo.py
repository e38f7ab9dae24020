import unittest
from dataclasses import replace
from unittest import mock

import numpy as np
import pytest
from numpy.testing import assert_allclose

from skchemo.errors import BlowUpError, ConfigurationError
from skchemo.grid import Grid, ScalarField, gradient_squared
from skchemo.models import chemo
from skchemo.models.chemo import (InitialData, SimParams, State, cfl_dt,
                                  init_state, recover_c, step_system)
from skchemo.models.fluid import FluidConfig
from skchemo.oracles import logistic_solution


def _params(n=16, **kwargs):
    init = kwargs.pop('init', InitialData())
    return SimParams(Grid.init_square(n), init=init, **kwargs)


def _advance(state, params, t_end, dt):
    while state.t < t_end - 1e-12:
        state = step_system(state, params, min(dt, t_end - state.t))
    return state


@pytest.mark.parametrize("preset", ['uniform', 'gauss-bump', 'two-bump',
                                    'vortex-fluid'])
def test_presets(preset):
    params = _params(init=InitialData(preset))
    state = init_state(params)
    assert isinstance(state, State)
    assert state.t == 0. and state.steps == 0
    assert state.mass0 == pytest.approx(state.n.integral())
    assert state.n.min() >= 0.
    assert state.w.min() == 0.
    assert recover_c(state).max() == pytest.approx(state.c0_max)
    assert state.u.boundary_max() == 0.
    if preset == 'vortex-fluid':
        assert max(state.u.max_abs()) > 0.
    else:
        assert max(state.u.max_abs()) == 0.


class RecoverSignal(unittest.TestCase):

    def runTest(self):
        init = InitialData('gauss-bump', c_amp=3., c_tilt=2.)
        state = init_state(_params(init=init))
        X, _ = state.grid.cell_centers()
        c0 = 3. * (1. + 2. * X) / 3.
        assert_allclose(recover_c(state).values, c0, rtol=1e-12)
        self.assertAlmostEqual(state.c0_max, float(np.max(c0)))


@pytest.mark.parametrize(
    "kwargs",
    [
        {'preset': 'three-bump'},
        {'c_amp': 0.},
        {'n_base': -1.},
        {'sigma': 0.},
        {'c_tilt': -1.},
    ]
)
def test_invalid_initial_data(kwargs):
    with pytest.raises(ConfigurationError):
        InitialData(**kwargs)


@pytest.mark.parametrize(
    "kwargs",
    [
        {'chi': 0.},
        {'mu': -1.},
        {'r': np.nan},
        {'dt_safety': 0.},
        {'dt_safety': 1.5},
        {'dt_max': 0.},
        {'t_end': -1.},
    ]
)
def test_invalid_params(kwargs):
    with pytest.raises(ConfigurationError):
        _params(**kwargs)


class ZeroMass(unittest.TestCase):

    def runTest(self):
        params = _params(init=InitialData('uniform', n_base=0.))
        with self.assertRaises(ConfigurationError):
            init_state(params)


class UniformStaysUniform(unittest.TestCase):

    def runTest(self):
        params = _params(init=InitialData('uniform', n_base=.5), r=1.,
                         mu=1.)
        state = init_state(params)
        for _ in range(5):
            state = step_system(state, params)
            self.assertLessEqual(np.ptp(state.n.values), 1e-12)
            self.assertLessEqual(np.ptp(state.w.values), 1e-12)
            self.assertLessEqual(max(state.u.max_abs()), 1e-12)
        self.assertEqual(state.steps, 5)


class LogisticOracle(unittest.TestCase):
    """Uniform data follows the logistic ODE."""

    def runTest(self):
        params = _params(init=InitialData('uniform', n_base=.5), r=1.,
                         mu=1., t_end=.5)
        state = _advance(init_state(params), params, .5, 1e-3)
        self.assertAlmostEqual(state.t, .5, places=12)
        exact = logistic_solution(.5, 1., 1., .5)
        self.assertLess(abs(state.n.max() - exact), 1e-3)


class EmptyDensity(unittest.TestCase):
    """Without cells the signal obeys a maximum principle and its gradient
    energy does not grow."""

    def runTest(self):
        params = _params()
        state = init_state(params)
        state = replace(state, n=ScalarField.constant(state.grid, 0.))
        wmax = state.w.max()
        dirichlet = gradient_squared(state.w).integral()
        self.assertGreater(dirichlet, 0.)
        for _ in range(5):
            state = step_system(state, params)
            self.assertEqual(state.n.max(), 0.)
            self.assertLessEqual(state.w.max(), wmax + 1e-9)
            wmax = state.w.max()
            new = gradient_squared(state.w).integral()
            self.assertLessEqual(new, dirichlet * (1. + 1e-12))
            dirichlet = new


class MassIdentity(unittest.TestCase):
    """Transport and diffusion conserve mass; reaction and clamping do not."""

    n = 16
    tol = 1e-6

    def runTest(self):
        params = _params(self.n, chi=.5, r=1., mu=1.)
        state = init_state(params)
        for _ in range(3):
            new = step_system(state, params)
            dt = new.t - state.t
            n = state.n.values
            gain = float(np.sum(n) * state.grid.cell_area)
            loss = float(np.sum(n ** 2) * state.grid.cell_area)
            change = new.n.integral() - state.n.integral()
            clamped = new.clamped_mass - state.clamped_mass
            self.assertLessEqual(abs(change - dt * (gain - loss) - clamped),
                                 self.tol * dt * (gain + loss))
            state = new


class MassIdentityFine(MassIdentity):

    n = 128
    tol = 5e-3


class SignalMassIdentity(unittest.TestCase):

    def runTest(self):
        params = _params(init=InitialData('gauss-bump', c_tilt=0.))
        state = init_state(params)
        self.assertEqual(state.w.max(), 0.)
        for _ in range(3):
            new = step_system(state, params)
            dt = new.t - state.t
            self.assertGreater(new.w.min(), 0.)
            expected = dt * (new.n.integral()
                             - gradient_squared(state.w).integral())
            self.assertAlmostEqual(new.w.integral() - state.w.integral(),
                                   expected, delta=1e-8)
            state = new


class TimeStepCap(unittest.TestCase):

    def runTest(self):
        params = _params()
        state = step_system(init_state(params), params, dt=1e-4)
        self.assertAlmostEqual(state.t, 1e-4)
        self.assertEqual(state.steps, 1)


class TimeStepLimits(unittest.TestCase):

    def runTest(self):
        # at rest only the reaction and dt_max limits remain
        params = _params(init=InitialData('uniform', n_base=.5), r=1.,
                         mu=1., dt_max=.05, dt_safety=.4)
        self.assertAlmostEqual(cfl_dt(init_state(params), params), .02)
        params = replace(params, r=4., mu=2., dt_max=1.)
        self.assertAlmostEqual(cfl_dt(init_state(params), params),
                               .4 / 6.)

        params = _params(init=InitialData('vortex-fluid', u_amp=10.))
        state = init_state(params)
        umax = max(state.u.max_abs())
        self.assertLessEqual(cfl_dt(state, params),
                             .4 * state.grid.dx / umax * (1. + 1e-12))


class BlowUp(unittest.TestCase):

    def runTest(self):
        params = _params()
        state = init_state(params)
        with mock.patch.object(chemo, 'BLOWUP_FACTOR', 1e-3):
            with self.assertRaises(BlowUpError) as ctx:
                step_system(state, params)
        e = ctx.exception
        self.assertGreater(e.t, 0.)
        self.assertGreater(e.value, e.threshold)


class ClampingIsAccounted(unittest.TestCase):

    def runTest(self):
        params = _params(init=InitialData('uniform', n_base=2.), r=1.,
                         mu=1.)
        state = init_state(params)
        # an oversized explicit reaction step overshoots to n = -2
        with mock.patch.object(chemo, 'cfl_dt', return_value=2.):
            with self.assertWarns(UserWarning):
                state = step_system(state, params)
        self.assertEqual(state.n.max(), 0.)
        self.assertAlmostEqual(state.clamped_mass, 2.)
        self.assertEqual(state.w.min(), 0.)


class ParamsProperties(unittest.TestCase):

    def runTest(self):
        params = _params(fluid=FluidConfig(gravity=(0., -1.)))
        self.assertEqual(params.gravity, (0., -1.))
        self.assertEqual(params.equilibrium, 1.)
        self.assertEqual(replace(params, r=-1.).equilibrium, 0.)


if __name__ == '__main__':
    unittest.main()
