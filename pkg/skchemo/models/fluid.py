r"""Incompressible Navier--Stokes flow driven by buoyancy.

The velocity obeys

.. math::

    u_t + (u \cdot \nabla) u = \Delta u + \nabla P + n \nabla \phi,
    \quad \nabla \cdot u = 0,

with no-slip walls and a constant gravitational acceleration
:math:`\nabla \phi = g`.  One step is IMEX: explicit upwind convection and
buoyancy, backward Euler viscous diffusion with unit viscosity, and a discrete
Helmholtz projection onto solenoidal face fields.

"""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from numpy import ndarray

from skchemo.grid import (Grid, ScalarField, VectorField, divergence,
                          gradient)
from skchemo.grid.operators import _pad
from skchemo.models import poisson
from skchemo.utils import solve, solver_iter_pcg


#: Tolerance of the implicit viscous solve, relative to the increment.
VISCOUS_TOL = 1e-10


@dataclass(frozen=True)
class FluidConfig:
    """Fluid model and pressure solver settings."""

    include_convection: bool = False
    gravity: Tuple[float, float] = field(default=(0., 0.))
    poisson_tol: float = 1e-10
    poisson_max_iter: Optional[int] = None

    def __post_init__(self):
        g = tuple(float(x) for x in self.gravity)
        if len(g) != 2 or not np.all(np.isfinite(g)):
            raise ValueError("Gravity must be a finite 2-vector.")
        object.__setattr__(self, 'gravity', g)
        if not 0. < self.poisson_tol <= 1e-6:
            raise ValueError("poisson_tol must be in (0, 1e-6], got {}."
                             .format(self.poisson_tol))
        if self.poisson_max_iter is not None and self.poisson_max_iter < 1:
            raise ValueError("poisson_max_iter must be positive.")

    def max_iter(self, grid: Grid) -> int:
        if self.poisson_max_iter is None:
            return 10 * grid.ncells
        return self.poisson_max_iter


def project(v: VectorField,
            config: Optional[FluidConfig] = None) \
        -> Tuple[VectorField, ScalarField]:
    """Discrete Helmholtz projection.

    Solves :math:`\\Delta q = \\nabla \\cdot v` with homogeneous Neumann
    conditions and zero mean, and returns ``(v - grad q, q)``.  The
    divergence of the result is below ``poisson_tol`` times the maximum
    divergence of ``v``.

    Raises
    ------
    SolverError
        If the pressure iteration does not converge.

    """
    if config is None:
        config = FluidConfig()
    grid = v.grid
    b = divergence(v).values.ravel()
    b = b - np.mean(b)
    bmax = float(np.max(np.abs(b)))
    if bmax == 0.:
        return v.copy(), ScalarField.constant(grid, 0.)

    A = -poisson.laplace(grid, 'neumann')
    solver = solver_iter_pcg(rtol=0.,
                             atol=config.poisson_tol * bmax,
                             maxiter=config.max_iter(grid))
    q = solve(A, -b, solver=solver)
    # one refinement step if the true residual drifted above the tolerance
    res = -b - A @ q
    if np.max(np.abs(res)) > config.poisson_tol * bmax:
        q = q + solve(A, res - np.mean(res), solver=solver)
    q = ScalarField(grid, (q - np.mean(q)).reshape(grid.shape))
    g = gradient(q)
    return VectorField(grid, v.u1 - g.u1, v.u2 - g.u2, v.bc), q


def convection(u: VectorField) -> Tuple[ndarray, ndarray]:
    """First-order upwind (u . grad) u at the interior faces."""
    grid = u.grid
    dx, dy = grid.dx, grid.dy

    # u1 on x-faces
    a = u.u1[1:-1]
    b = .25 * (u.u2[:-1, :-1] + u.u2[1:, :-1] + u.u2[:-1, 1:] + u.u2[1:, 1:])
    dudx = np.where(a > 0,
                    u.u1[1:-1] - u.u1[:-2],
                    u.u1[2:] - u.u1[1:-1]) / dx
    p = _pad(u.u1[1:-1], 1, 'dirichlet')
    dudy = np.where(b > 0, p[:, 1:-1] - p[:, :-2], p[:, 2:] - p[:, 1:-1]) / dy
    c1 = a * dudx + b * dudy

    # u2 on y-faces
    a = .25 * (u.u1[:-1, :-1] + u.u1[:-1, 1:] + u.u1[1:, :-1] + u.u1[1:, 1:])
    b = u.u2[:, 1:-1]
    p = _pad(u.u2[:, 1:-1], 0, 'dirichlet')
    dvdx = np.where(a > 0, p[1:-1] - p[:-2], p[2:] - p[1:-1]) / dx
    dvdy = np.where(b > 0,
                    u.u2[:, 1:-1] - u.u2[:, :-2],
                    u.u2[:, 2:] - u.u2[:, 1:-1]) / dy
    c2 = a * dvdx + b * dvdy

    return c1, c2


def buoyancy(n: ScalarField,
             gravity: Tuple[float, float]) -> Tuple[ndarray, ndarray]:
    """Force (n - mean n) g at the interior faces.

    The mean part is an exact discrete gradient and is balanced by the
    hydrostatic pressure, see :func:`hydrostatic_pressure`.

    """
    nbar = np.mean(n.values)
    f1 = gravity[0] * (.5 * (n.values[:-1] + n.values[1:]) - nbar)
    f2 = gravity[1] * (.5 * (n.values[:, :-1] + n.values[:, 1:]) - nbar)
    return f1, f2


def hydrostatic_pressure(n: ScalarField,
                         gravity: Tuple[float, float]) -> ndarray:
    """Zero-mean pressure with grad P = -(mean n) g."""
    X, Y = n.grid.cell_centers()
    P = -np.mean(n.values) * (gravity[0] * X + gravity[1] * Y)
    return P - np.mean(P)


def _implicit_increment(L, f: ndarray, dt: float) -> ndarray:
    """Return f_new - f for the backward Euler step (I - dt L) f_new = f."""
    rhs = dt * (L @ f)
    A = poisson.mass(L.shape[0]) - dt * L
    return solve(A, rhs, x0=rhs,
                 solver=solver_iter_pcg(rtol=VISCOUS_TOL, atol=0.))


def viscous_step(u1: ndarray, u2: ndarray, grid: Grid, dt: float) \
        -> VectorField:
    """Backward Euler step of u_t = Laplace u under no-slip."""
    L1, L2 = poisson.vector_laplace(grid)
    u1 = u1.copy()
    u2 = u2.copy()
    i1 = u1[1:-1].ravel()
    i2 = u2[:, 1:-1].ravel()
    u1[1:-1] = (i1 + _implicit_increment(L1, i1, dt)).reshape(u1[1:-1].shape)
    u2[:, 1:-1] = (i2 + _implicit_increment(L2, i2, dt))\
        .reshape(u2[:, 1:-1].shape)
    return VectorField(grid, u1, u2, 'noslip')


def step_fluid(state,
               params,
               dt: float,
               n: Optional[ScalarField] = None) \
        -> Tuple[VectorField, ScalarField]:
    """Advance the velocity of ``state`` by one IMEX step.

    Parameters
    ----------
    state
        The current :class:`~skchemo.models.chemo.State`.
    params
        The :class:`~skchemo.models.chemo.SimParams`; ``params.fluid``
        holds gravity and the solver settings.
    dt
        The time step.
    n
        The density driving the buoyancy, by default ``state.n``.

    Returns
    -------
    The new solenoidal velocity and the zero-mean pressure.

    """
    if dt <= 0:
        raise ValueError("Time step must be positive, got {}.".format(dt))
    config = params.fluid
    u = state.u
    grid = u.grid
    if n is None:
        n = state.n

    f1, f2 = buoyancy(n, config.gravity)
    if config.include_convection:
        c1, c2 = convection(u)
        f1 = f1 - c1
        f2 = f2 - c2

    u1 = u.u1.copy()
    u2 = u.u2.copy()
    u1[1:-1] += dt * f1
    u2[:, 1:-1] += dt * f2

    ustar = viscous_step(u1, u2, grid, dt)
    unew, q = project(ustar, config)
    p = -q.values / dt + hydrostatic_pressure(n, config.gravity)
    return unew.with_noslip(), ScalarField(grid, p - np.mean(p))


def kinetic_energy(u: VectorField) -> float:
    """Integral of |u|^2 with the trapezoidal rule across the faces."""
    grid = u.grid
    w1 = np.ones(grid.nx + 1)
    w1[[0, -1]] = .5
    w2 = np.ones(grid.ny + 1)
    w2[[0, -1]] = .5
    return float((np.sum(w1[:, None] * u.u1 ** 2)
                  + np.sum(w2[None, :] * u.u2 ** 2)) * grid.cell_area)


def dissipation(u: VectorField) -> float:
    """Discrete Dirichlet energy of a no-slip field, -(u, Laplace u)."""
    L1, L2 = poisson.vector_laplace(u.grid)
    i1 = u.u1[1:-1].ravel()
    i2 = u.u2[:, 1:-1].ravel()
    return float(-(i1 @ (L1 @ i1) + i2 @ (L2 @ i2)) * u.grid.cell_area)


def fluid_energy_diagnostics(state, params=None) -> Tuple[float, float]:
    """Return the kinetic energy and the dissipation of ``state.u``."""
    return kinetic_energy(state.u), max(dissipation(state.u), 0.)
