r"""Energy functionals, norms and derived constants of a :class:`State`.

For :math:`r > 0` the entropy-type functional is

.. math::

    F(n, w) = \int_\Omega H(n) \, dx + \frac{\chi}{2} \int_\Omega |\nabla w|^2 \, dx,
    \quad H(s) = s \ln \frac{\mu s}{e r} + \frac{r}{\mu},

and for :math:`r \leq 0` the shifted entropy
:math:`\int_\Omega n (\ln n + a) \, dx` replaces :math:`\int_\Omega H(n)`.
All integrals use the midpoint rule on the cells.

"""

from typing import NamedTuple, Optional

import numpy as np
from numpy import ndarray
from scipy.special import xlogy

from skchemo.errors import RegimeError
from skchemo.grid import gradient_squared
from skchemo.models.chemo import SimParams, State, recover_c
from skchemo.models.fluid import kinetic_energy


class EnergyReport(NamedTuple):
    regime: str  #: 'positive_r' or 'nonpositive_r'
    f_value: float
    h_integral: float
    grad_w_sq: float
    a: Optional[float]
    t: float


class DerivedConstants(NamedTuple):
    gamma: float  #: |Omega| / (mu mass0), a time
    lambda1: float  #: first nonzero Neumann eigenvalue of -Laplace
    cp_dirichlet: float  #: first Dirichlet eigenvalue of -Laplace
    mass0: float
    area: float


class Norms(NamedTuple):
    mass: float
    l2_n: float
    linf_n: float
    dev_inf: float
    grad_w_l2: float
    grad_w_l6: float
    grad_w_linf: float
    u_l2: float
    u_linf: float
    c_min: float
    c_max: float


def H(s, r: float, mu: float):
    """Evaluate s ln(mu s / (e r)) + r / mu with H(0) = r / mu.

    Nonnegative and convex for s >= 0, zero exactly at the equilibrium
    s = r / mu.

    Raises
    ------
    RegimeError
        If r <= 0; use the shifted entropy of :func:`energy` instead.

    """
    if not r > 0:
        raise RegimeError("H is defined for r > 0 only, got r = {}."
                          .format(r))
    s = np.asarray(s, dtype=np.float64)
    if np.any(s < 0.):
        raise ValueError("H requires s >= 0.")
    out = xlogy(s, mu * s / r) - s + r / mu
    if out.ndim == 0:
        return float(out)
    return out


def _integral(state: State, values: ndarray) -> float:
    return float(np.sum(values) * state.grid.cell_area)


def energy(state: State,
           params: SimParams,
           a: Optional[float] = None) -> EnergyReport:
    """Evaluate the regime-appropriate energy functional.

    Parameters
    ----------
    state
        The state to evaluate.
    params
        Supplies chi, r and mu.
    a
        The entropy shift for r <= 0, by default ``params.energy_a``.

    """
    grad_w_sq = _integral(state, gradient_squared(state.w).values)
    n = state.n.values
    if params.r > 0:
        regime = 'positive_r'
        a = None
        h = _integral(state, H(n, params.r, params.mu))
    else:
        regime = 'nonpositive_r'
        if a is None:
            a = params.energy_a
        h = _integral(state, xlogy(n, n) + a * n)
    return EnergyReport(regime=regime,
                        f_value=h + .5 * params.chi * grad_w_sq,
                        h_integral=h,
                        grad_w_sq=grad_w_sq,
                        a=a,
                        t=state.t)


def norms(state: State, params: SimParams) -> Norms:
    """Diagnostic norms; the gradient norms are those of grad w = -grad c/c."""
    n = state.n.values
    gsq = gradient_squared(state.w).values
    U1, U2 = state.u.cell_centered()
    c = recover_c(state).values
    return Norms(
        mass=_integral(state, n),
        l2_n=float(np.sqrt(_integral(state, n ** 2))),
        linf_n=float(np.max(np.abs(n))),
        dev_inf=float(np.max(np.abs(n - params.equilibrium))),
        grad_w_l2=float(np.sqrt(_integral(state, gsq))),
        grad_w_l6=_integral(state, gsq ** 3) ** (1. / 6.),
        grad_w_linf=float(np.sqrt(np.max(gsq))),
        u_l2=float(np.sqrt(kinetic_energy(state.u))),
        u_linf=float(np.sqrt(np.max(U1 ** 2 + U2 ** 2))),
        c_min=float(np.min(c)),
        c_max=float(np.max(c)),
    )


def derived_constants(state: State, params: SimParams) -> DerivedConstants:
    """Constants of the decay bounds computed from the initial mass."""
    grid = state.grid
    return DerivedConstants(
        gamma=grid.area / (params.mu * state.mass0),
        lambda1=min((np.pi / grid.lx) ** 2, (np.pi / grid.ly) ** 2),
        cp_dirichlet=np.pi ** 2 * (1. / grid.lx ** 2 + 1. / grid.ly ** 2),
        mass0=state.mass0,
        area=grid.area,
    )
