r"""Chemotaxis with singular sensitivity and logistic source.

The population density :math:`n` and the signal :math:`c` are evolved in
the desingularized variables :math:`(n, w)`, :math:`w = -\ln(c / \|c_0\|_\infty)`,

.. math::

    n_t + u \cdot \nabla n = \Delta n + \chi \nabla \cdot (n \nabla w)
    + n (r - \mu n),

    w_t + u \cdot \nabla w = \Delta w - |\nabla w|^2 + n,

with homogeneous Neumann conditions, coupled to the buoyancy-driven flow of
:mod:`skchemo.models.fluid`.  The signal is recovered as
:math:`c = \|c_0\|_\infty e^{-w}`.

"""

import warnings
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np
from numpy import ndarray

from skchemo.errors import BlowUpError, ConfigurationError
from skchemo.grid import (Grid, ScalarField, VectorField, advect,
                          chemotaxis_flux_div, curl, gradient,
                          gradient_squared)
from skchemo.models import poisson
from skchemo.models.fluid import FluidConfig, step_fluid
from skchemo.utils import solve, solver_iter_pcg


#: Tolerance of the implicit diffusion solves, relative to the increment.
DIFFUSION_TOL = 1e-10

#: Guard against division by zero in the reaction time step limit.
EPS = 1e-30

#: Blow-up guard factor.
BLOWUP_FACTOR = 1e6

#: Clamped mass, relative to the initial mass, above which a warning is given.
CLAMP_WARNING = 1e-8

PRESETS = ('uniform', 'gauss-bump', 'two-bump', 'vortex-fluid')


@dataclass(frozen=True)
class InitialData:
    """Named initial data preset and its amplitude parameters.

    - ``'uniform'``: :math:`n_0 \\equiv` ``n_base``, :math:`c_0 \\equiv`
      ``c_amp``, :math:`u_0 = 0`.
    - ``'gauss-bump'``: ``n_base`` plus a Gaussian of height ``n_amp`` and
      width ``sigma * min(lx, ly)`` at ``(0.35 lx, 0.5 ly)``; signal
      ``c_amp * (1 + c_tilt x / lx) / (1 + c_tilt)``; :math:`u_0 = 0`.
    - ``'two-bump'``: as above with two Gaussians.
    - ``'vortex-fluid'``: ``'gauss-bump'`` with a cellular vortex of
      magnitude ``u_amp``.

    """

    preset: str = 'gauss-bump'
    n_base: float = .5
    n_amp: float = 1.
    sigma: float = .15
    c_amp: float = 1.
    c_tilt: float = 1.
    u_amp: float = 1.

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ConfigurationError("Unknown initial data preset '{}', "
                                     "choose one of {}."
                                     .format(self.preset, ', '.join(PRESETS)))
        if self.c_amp <= 0:
            raise ConfigurationError("The signal amplitude c_amp must be "
                                     "positive, got {}.".format(self.c_amp))
        if self.n_base < 0 or self.n_amp < 0:
            raise ConfigurationError("Initial density must be nonnegative.")
        if self.sigma <= 0 or self.c_tilt < 0:
            raise ConfigurationError("sigma must be positive and c_tilt "
                                     "nonnegative.")


@dataclass(frozen=True)
class SimParams:
    """Model parameters, discretization and time step control."""

    grid: Grid
    chi: float = .5
    r: float = 1.
    mu: float = 1.
    fluid: FluidConfig = field(default_factory=FluidConfig)
    dt_safety: float = .4
    dt_max: float = .05
    t_end: float = 1.
    init: InitialData = field(default_factory=InitialData)
    energy_a: float = 10.

    def __post_init__(self):
        if not self.chi > 0:
            raise ConfigurationError("chi must be positive.")
        if not self.mu > 0:
            raise ConfigurationError("mu must be positive.")
        if not np.isfinite(self.r):
            raise ConfigurationError("r must be finite.")
        if not 0 < self.dt_safety <= 1:
            raise ConfigurationError("dt_safety must be in (0, 1].")
        if not self.dt_max > 0 or not self.t_end > 0:
            raise ConfigurationError("dt_max and t_end must be positive.")

    @property
    def gravity(self) -> Tuple[float, float]:
        return self.fluid.gravity

    @property
    def equilibrium(self) -> float:
        """The limit r_+ / mu of the density."""
        return max(self.r, 0.) / self.mu


@dataclass(frozen=True, repr=False)
class State:
    """Discrete fields at one time level."""

    t: float
    n: ScalarField
    w: ScalarField
    u: VectorField
    p: ScalarField
    c0_max: float  #: sup norm of the initial signal
    n0_max: float  #: sup norm of the initial density
    mass0: float  #: initial mass of the density
    clamped_mass: float = 0.  #: mass added by clamping n at zero
    steps: int = 0

    @property
    def grid(self) -> Grid:
        return self.n.grid

    def __repr__(self):
        return "State(t={:.6g}, steps={}, mass={:.6g})".format(
            self.t, self.steps, self.n.integral())


def _gaussian(X: ndarray, Y: ndarray, x0: float, y0: float, s: float):
    return np.exp(-((X - x0) ** 2 + (Y - y0) ** 2) / (2. * s ** 2))


def init_state(params: SimParams) -> State:
    """Sample the initial data preset of ``params.init``.

    Raises
    ------
    ConfigurationError
        If the initial density has no mass.

    """
    grid = params.grid
    init = params.init
    X, Y = grid.cell_centers()
    lx, ly = grid.lx, grid.ly
    s = init.sigma * min(lx, ly)

    if init.preset == 'uniform':
        n0 = np.full(grid.shape, init.n_base)
        c0 = np.full(grid.shape, init.c_amp)
    else:
        if init.preset == 'two-bump':
            bump = (_gaussian(X, Y, .3 * lx, .35 * ly, s)
                    + _gaussian(X, Y, .7 * lx, .65 * ly, s))
        else:
            bump = _gaussian(X, Y, .35 * lx, .5 * ly, s)
        n0 = init.n_base + init.n_amp * bump
        c0 = init.c_amp * (1. + init.c_tilt * X / lx) / (1. + init.c_tilt)

    if init.preset == 'vortex-fluid':
        Xn, Yn = grid.nodes()
        psi = (init.u_amp * min(lx, ly) / np.pi
               * np.sin(np.pi * Xn / lx) ** 2 * np.sin(np.pi * Yn / ly) ** 2)
        psi[[0, -1], :] = 0.
        psi[:, [0, -1]] = 0.
        u0 = curl(psi, grid).with_noslip()
    else:
        u0 = VectorField.zeros(grid)

    n = ScalarField(grid, n0)
    mass0 = n.integral()
    if not mass0 > 0:
        raise ConfigurationError("The initial density must have positive "
                                 "mass.")
    c0_max = float(np.max(c0))
    w = ScalarField(grid, np.maximum(-np.log(c0 / c0_max), 0.))

    return State(t=0.,
                 n=n,
                 w=w,
                 u=u0,
                 p=ScalarField.constant(grid, 0.),
                 c0_max=c0_max,
                 n0_max=n.max(),
                 mass0=mass0)


def cfl_dt(state: State, params: SimParams) -> float:
    """Time step from the transport, chemotaxis and reaction limits."""
    grid = state.grid

    def limit(h: float, speed: float) -> float:
        return h / speed if speed > 0 else np.inf

    umax1, umax2 = state.u.max_abs()
    g = gradient(state.w)
    candidates = [
        limit(grid.dx, umax1),
        limit(grid.dy, umax2),
        limit(grid.dx, params.chi * float(np.max(np.abs(g.u1)))),
        limit(grid.dy, params.chi * float(np.max(np.abs(g.u2)))),
        1. / (abs(params.r) + 2. * params.mu * state.n.max() + EPS),
        params.dt_max,
    ]
    return params.dt_safety * min(candidates)


def recover_c(state: State) -> ScalarField:
    """Signal concentration c = c0_max exp(-w)."""
    return ScalarField(state.grid, state.c0_max * np.exp(-state.w.values))


def _diffuse(f: ScalarField, explicit: ndarray, dt: float) -> ndarray:
    """Return f_new for (f_new - f) / dt = Laplace f_new + explicit.

    The backward Euler system is solved for the increment so that the solver
    tolerance is relative to the change of ``f`` and not to ``f`` itself.

    """
    L = poisson.laplace(f.grid, f.bc)
    values = f.values.ravel()
    rhs = dt * (L @ values + explicit.ravel())
    A = poisson.mass(L.shape[0]) - dt * L
    delta = solve(A, rhs, x0=rhs,
                  solver=solver_iter_pcg(rtol=DIFFUSION_TOL, atol=0.))
    return (values + delta).reshape(f.grid.shape)


def blowup_threshold(state: State, params: SimParams) -> float:
    return BLOWUP_FACTOR * (state.n0_max + abs(params.r) / params.mu + 1.)


def step_system(state: State,
                params: SimParams,
                dt: Optional[float] = None) -> State:
    """Advance the coupled system by one time step.

    The operators are applied in a fixed order: density, signal, fluid.  The
    density is clamped at zero after its update and the added mass is
    accumulated in ``State.clamped_mass``.

    Parameters
    ----------
    state
        The current state.
    params
        The model parameters.
    dt
        Optional upper bound for the time step chosen by :func:`cfl_dt`.

    Raises
    ------
    BlowUpError
        If the density exceeds the blow-up guard or becomes non-finite.
    SolverError
        If an implicit solve does not converge.

    """
    grid = state.grid
    step = cfl_dt(state, params)
    if dt is not None:
        step = min(step, dt)
    n, w, u = state.n, state.w, state.u

    # (i) density
    explicit = (-advect(n, u).values
                + chemotaxis_flux_div(n, w, params.chi).values
                + n.values * (params.r - params.mu * n.values))
    n1 = _diffuse(n, explicit, step)
    t1 = state.t + step
    threshold = blowup_threshold(state, params)
    nmax = float(np.max(n1)) if np.all(np.isfinite(n1)) else np.inf
    if nmax > threshold:
        raise BlowUpError(t1, nmax, threshold)
    negative = n1 < 0.
    clamped = float(-np.sum(n1[negative]) * grid.cell_area)
    n1[negative] = 0.
    n1 = ScalarField(grid, n1)

    # (ii) signal
    explicit = (-advect(w, u).values
                - gradient_squared(w).values
                + n1.values)
    w1 = _diffuse(w, explicit, step)
    if not np.all(np.isfinite(w1)):
        raise BlowUpError(t1, np.inf, threshold)
    w1 = ScalarField(grid, np.maximum(w1, 0.))

    # (iii) fluid
    u1, p1 = step_fluid(state, params, step, n=n1)

    clamped_total = state.clamped_mass + clamped
    if (clamped > 0 and clamped_total > CLAMP_WARNING * state.mass0
            and state.clamped_mass <= CLAMP_WARNING * state.mass0):
        warnings.warn("Positivity clamping added {:.3e} of mass, more than "
                      "{:g} of the initial mass.".format(clamped_total,
                                                         CLAMP_WARNING))

    return replace(state,
                   t=t1,
                   n=n1,
                   w=w1,
                   u=u1,
                   p=p1,
                   clamped_mass=clamped_total,
                   steps=state.steps + 1)
