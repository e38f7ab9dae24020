"""This module contains utility functions such as convenient access to
SciPy linear solvers."""

import logging
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spl
from numpy import ndarray
from scipy.sparse import spmatrix

from skchemo.errors import SolverError


logger = logging.getLogger(__name__)


# custom types for describing input and output values


LinearSolver = Callable[..., ndarray]


# preconditioners, e.g. for :func:`skchemo.utils.solver_iter_krylov`


def build_pc_diag(A: spmatrix) -> spmatrix:
    """Diagonal (Jacobi) preconditioner."""
    return sp.spdiags(1.0/A.diagonal(), 0, A.shape[0], A.shape[0])


# solvers for :func:`skchemo.utils.solve`


def solver_iter_krylov(krylov: Optional[LinearSolver] = spl.cg,
                       **kwargs) -> LinearSolver:
    """Krylov-subspace iterative linear solver.

    Parameters
    ----------
    krylov
        A Krylov iterative linear solver, like, and by default,
        :func:`scipy.sparse.linalg.cg`

    Any remaining keyword arguments are passed on to the solver, in particular
    rtol and atol, the tolerances, maxiter, and M, the preconditioner.  If the
    last is omitted, a diagonal preconditioner is supplied using
    :func:`skchemo.utils.build_pc_diag`.

    Returns
    -------
    LinearSolver
        A solver function that can be passed to :func:`solve`.

    Raises
    ------
    SolverError
        If the iteration stops before reaching the tolerance.

    """
    def solver(A, b, **solve_time_kwargs):
        params = {**kwargs, **solve_time_kwargs}
        if 'M' not in params:
            params['M'] = build_pc_diag(A)
        niter = [0]

        def callback(x):
            niter[0] += 1

        sol, info = krylov(A, b, callback=callback, **params)
        residual = float(np.linalg.norm(b - A @ sol))
        tol = max(params.get('rtol', 1e-5) * float(np.linalg.norm(b)),
                  params.get('atol', 0.))
        if info != 0:
            raise SolverError("{} did not converge in {} iterations"
                              .format(krylov.__name__, niter[0]),
                              residual, tol, niter[0])
        logger.debug("%s converged in %d iterations, residual %.3e",
                     krylov.__name__, niter[0], residual)
        return sol

    return solver


def solver_iter_pcg(**kwargs) -> LinearSolver:
    """Conjugate gradient solver, specialized from solver_iter_krylov"""
    return solver_iter_krylov(**kwargs)


def solve(A: spmatrix,
          b: ndarray,
          x0: Optional[ndarray] = None,
          solver: Optional[LinearSolver] = None,
          **kwargs) -> ndarray:
    """Solve a symmetric positive (semi)definite linear system.

    The remaining keyword arguments are passed to the solver.  A zero right
    hand side returns the zero vector without iterating.

    Parameters
    ----------
    A
        The system matrix
    b
        The right hand side vector.
    x0
        Optional initial guess.
    solver
        By default, :func:`skchemo.utils.solver_iter_pcg`.

    """
    if not np.any(b):
        return np.zeros_like(b)
    if solver is None:
        solver = solver_iter_pcg()
    if x0 is not None:
        kwargs['x0'] = x0
    return solver(A, b, **kwargs)
