"""Time loop, diagnostics, bound checks and parameter sweeps.

A run is described by a :class:`RunConfig`, usually built from a named
scenario and ``key = value`` overrides:

>>> from skchemo.runner import make_config
>>> config = make_config({'t_end': '0.5', 'nx': '16', 'ny': '16'},
...                      scenario='logistic-uniform')
>>> config.params.mu, config.params.grid.nx
(1.0, 16)

"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import (Any, Callable, Dict, List, Mapping, NamedTuple,
                    Optional, Sequence, Tuple)

import numpy as np

from skchemo import io
from skchemo.errors import (BlowUpError, ConfigurationError, FitError,
                            SolverError)
from skchemo.functionals import (DerivedConstants, derived_constants,
                                 energy, norms)
from skchemo.grid import Grid, divergence, gradient_squared
from skchemo.io.meshio import to_file as to_vtk
from skchemo.models.chemo import (InitialData, SimParams, State, cfl_dt,
                                  init_state, step_system)
from skchemo.models.fluid import FluidConfig, fluid_energy_diagnostics
from skchemo.oracles import (MODELS, BoundCheck, DecayFit,
                             algebraic_upper_check, fit_decay,
                             l1_decay_bound, logistic_solution,
                             monotone_check, two_sided_algebraic_check,
                             upper_bound_check)


logger = logging.getLogger(__name__)


#: Relative tolerance for landing on an output time.
TIME_EPS = 1e-9


class DiagnosticsRow(NamedTuple):
    t: float
    dt: float
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
    energy_f: float
    div_residual: float
    clamped_mass_cum: float


class StepRecord(NamedTuple):
    """Integrals before and after one time step."""

    t: float  #: time after the step
    dt: float
    mass_before: float
    mass_after: float
    n_sq_before: float  #: integral of n^2 before the step
    w_mass_before: float
    w_mass_after: float
    grad_w_sq_before: float
    clamped: float  #: mass added by clamping during the step
    energy_f: float  #: energy after the step


class RunResult(NamedTuple):
    rows: List[DiagnosticsRow]
    checks: List[BoundCheck]
    fits: List[DecayFit]
    state: Optional[State] = None  #: the final state
    #: kinetic energy and dissipation of the fluid at the row times
    fluid: Optional[List[Tuple[float, float]]] = None


class SweepRow(NamedTuple):
    mu: float
    bounded: bool  #: the blow-up guard was not triggered
    final_dev_inf: float
    rate: float  #: exponential rate of dev_inf, nan if not fitted
    error: Optional[str] = None


# Named checks


class _Series(NamedTuple):
    """Everything a check is evaluated on."""

    columns: Dict[str, np.ndarray]
    records: List[StepRecord]
    config: 'RunConfig'
    consts: DerivedConstants


#: Relative slack of the L1 decay bound.
L1_SLACK = .05

#: Relative slack of the per-step integral identities.
BALANCE_SLACK = .02

#: Largest allowed energy increase per step after burn-in.
ENERGY_TOL = 1e-6

#: Allowed increase of max c between rows, relative to max c0.
MAX_PRINCIPLE_TOL = 1e-12

#: Largest allowed clamped mass, relative to the initial mass.
CLAMP_TOL = 1e-8

SANDWICH_CAP = 25.
GRAD_W_CAP = 50.

#: Final over peak value for the decay of Dirichlet and kinetic energies.
DECAY_FRACTION = .01

#: Largest kinetic energy after burn-in, relative to the largest before.
FLUID_BOUND_CAP = 10.

#: Absolute error of the mean density against the logistic solution.
LOGISTIC_TOL = 1e-3

#: Final deviation from the equilibrium r / mu.
EQUILIBRIUM_TOL = 1e-3


def _residual_check(name: str,
                    residuals: Sequence[float],
                    slack: float) -> BoundCheck:
    residuals = np.asarray(residuals, dtype=np.float64)
    if residuals.size == 0:
        return BoundCheck(name, 1., 0., slack, 0.)
    worst = float(np.max(residuals))
    return BoundCheck(name=name,
                      satisfied_fraction=float(np.mean(residuals <= slack)),
                      worst_violation=worst,
                      slack=slack,
                      value=worst)


def _decay_check(name: str, values: np.ndarray) -> BoundCheck:
    peak = float(np.max(values))
    if peak == 0.:
        return BoundCheck(name, 1., 0., 0., 0.)
    return upper_bound_check(name, values[-1:], DECAY_FRACTION * peak)


def _check_positivity(s: _Series) -> BoundCheck:
    check = upper_bound_check('positivity',
                              s.columns['clamped_mass_cum'] / s.consts.mass0,
                              CLAMP_TOL)
    if np.any(s.columns['c_min'] <= 0.):
        return check._replace(worst_violation=np.inf)
    return check


def _check_max_principle(s: _Series) -> BoundCheck:
    c_max = s.columns['c_max']
    return monotone_check('max-principle', s.columns['t'], c_max,
                          tol=MAX_PRINCIPLE_TOL * c_max[0])


def _check_l1_decay(s: _Series) -> BoundCheck:
    t = s.columns['t']
    bound = l1_decay_bound(s.consts, s.config.params.mu, t)
    return upper_bound_check('l1-decay', s.columns['mass'], bound, L1_SLACK)


def _check_mass_identity(s: _Series) -> BoundCheck:
    p = s.config.params
    residuals = []
    for rec in s.records:
        gain = rec.dt * p.r * rec.mass_before
        loss = rec.dt * p.mu * rec.n_sq_before
        change = rec.mass_after - rec.mass_before - rec.clamped
        scale = abs(gain) + loss
        residuals.append(abs(change - gain + loss) / scale if scale > 0
                         else abs(change))
    return _residual_check('mass-identity', residuals, BALANCE_SLACK)


def _check_w_mass_balance(s: _Series) -> BoundCheck:
    residuals = []
    for rec in s.records:
        source = rec.dt * rec.mass_after
        sink = rec.dt * rec.grad_w_sq_before
        change = rec.w_mass_after - rec.w_mass_before
        scale = source + sink
        residuals.append(abs(change - source + sink) / scale if scale > 0
                         else abs(change))
    return _residual_check('w-mass-balance', residuals, BALANCE_SLACK)


def _check_energy_monotone(s: _Series) -> BoundCheck:
    t = [rec.t for rec in s.records]
    f = [rec.energy_f for rec in s.records]
    return monotone_check('energy-monotone', t, f, s.config.window,
                          ENERGY_TOL)


def _check_sandwich_n(s: _Series) -> BoundCheck:
    return two_sided_algebraic_check(s.columns['t'], s.columns['linf_n'],
                                     s.config.window, SANDWICH_CAP,
                                     name='sandwich-n')


def _check_grad_w_upper(s: _Series) -> BoundCheck:
    return algebraic_upper_check(s.columns['t'], s.columns['grad_w_linf'],
                                 s.config.window, GRAD_W_CAP,
                                 name='grad-w-upper')


def _check_grad_w_decay(s: _Series) -> BoundCheck:
    return _decay_check('grad-w-decay', s.columns['grad_w_l2'] ** 2)


def _check_fluid_energy_decay(s: _Series) -> BoundCheck:
    return _decay_check('fluid-energy-decay', s.columns['u_l2'] ** 2)


def _check_fluid_energy_bounded(s: _Series) -> BoundCheck:
    t = s.columns['t']
    energy_u = s.columns['fluid_energy']
    start = s.config.window[0]
    early = energy_u[t <= start]
    late = energy_u[t >= start]
    if late.size == 0:
        late = energy_u[-1:]
    reference = float(np.max(early)) if early.size else float(energy_u[0])
    if reference == 0.:
        peak = float(np.max(late))
        return BoundCheck('fluid-energy-bounded', float(peak == 0.),
                          np.inf if peak > 0. else 0., 0., peak)
    return upper_bound_check('fluid-energy-bounded', late,
                             FLUID_BOUND_CAP * reference)


def _check_logistic_oracle(s: _Series) -> BoundCheck:
    p = s.config.params
    n0 = s.consts.mass0 / s.consts.area
    exact = logistic_solution(n0, p.r, p.mu, s.columns['t'])
    error = np.abs(s.columns['mass'] / s.consts.area - exact)
    return upper_bound_check('logistic-oracle', error, LOGISTIC_TOL)


def _check_equilibrium(s: _Series) -> BoundCheck:
    return upper_bound_check('equilibrium', s.columns['dev_inf'][-1:],
                             EQUILIBRIUM_TOL)


CHECKS: Dict[str, Callable[[_Series], BoundCheck]] = {
    'positivity': _check_positivity,
    'max-principle': _check_max_principle,
    'l1-decay': _check_l1_decay,
    'mass-identity': _check_mass_identity,
    'w-mass-balance': _check_w_mass_balance,
    'energy-monotone': _check_energy_monotone,
    'sandwich-n': _check_sandwich_n,
    'grad-w-upper': _check_grad_w_upper,
    'grad-w-decay': _check_grad_w_decay,
    'fluid-energy-decay': _check_fluid_energy_decay,
    'fluid-energy-bounded': _check_fluid_energy_bounded,
    'logistic-oracle': _check_logistic_oracle,
    'equilibrium': _check_equilibrium,
}


# Configuration


@dataclass(frozen=True)
class RunConfig:
    """A simulation and what to report about it.

    ``fits`` are ``'column:model'`` strings, e.g. ``'dev_inf:exp'``, fitted on
    ``fit_window``, which also serves as the burn-in window of the
    monotonicity and algebraic checks.  It defaults to the last two thirds
    of the run.

    """

    params: SimParams
    output_every: float = .1
    out_path: Optional[str] = None
    seed: int = 0
    checks: Tuple[str, ...] = ()
    fits: Tuple[str, ...] = ()
    fit_window: Optional[Tuple[float, float]] = None
    scenario: Optional[str] = None
    vtk_path: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'checks', tuple(self.checks))
        object.__setattr__(self, 'fits', tuple(self.fits))
        if not self.output_every > 0:
            raise ConfigurationError("output_every must be positive.")
        for name in self.checks:
            if name not in CHECKS:
                raise ConfigurationError("Unknown check '{}', choose from "
                                         "{}.".format(name, ', '.join(CHECKS)))
        for spec in self.fits:
            column, _, model = spec.partition(':')
            if column not in DiagnosticsRow._fields or model not in MODELS:
                raise ConfigurationError("Invalid fit '{}', expected "
                                         "'column:exp' or 'column:alg'."
                                         .format(spec))
        if self.fit_window is not None:
            a, b = self.fit_window
            if not 0 <= a < b:
                raise ConfigurationError("Invalid fit window {}."
                                         .format(self.fit_window))

    @property
    def fluid(self) -> FluidConfig:
        return self.params.fluid

    @property
    def window(self) -> Tuple[float, float]:
        if self.fit_window is None:
            return self.params.t_end / 3., self.params.t_end
        return self.fit_window


_PRESET_CHECKS = ('positivity', 'max-principle', 'mass-identity',
                  'w-mass-balance')

SCENARIOS: Dict[str, Dict[str, Any]] = {
    'logistic-uniform': {
        'preset': 'uniform', 'n_base': .5,
        'r': 1., 'mu': 1., 'chi': .5,
        'nx': 16, 'ny': 16, 'lx': 1., 'ly': 1.,
        'gravity_x': 0., 'gravity_y': 0.,
        'dt_max': 2.5e-3, 't_end': 16., 'output_every': .1,
        'checks': _PRESET_CHECKS + ('logistic-oracle', 'equilibrium'),
        'fits': ('dev_inf:exp',), 'fit_window': (2., 12.),
    },
    'thm12-r1': {
        'preset': 'vortex-fluid',
        'r': 1., 'mu': 20., 'chi': .5,
        'nx': 64, 'ny': 64, 'lx': 4., 'ly': 4.,
        'gravity_x': 0., 'gravity_y': -1.,
        't_end': 30., 'output_every': .1,
        'checks': _PRESET_CHECKS + ('energy-monotone', 'equilibrium',
                                    'fluid-energy-bounded'),
        'fits': ('dev_inf:exp', 'grad_w_l6:exp', 'u_linf:exp',
                 'c_max:exp'),
        'fit_window': (10., 30.),
    },
    'thm13-r0': {
        'preset': 'gauss-bump',
        'r': 0., 'mu': 1., 'chi': .5,
        'nx': 64, 'ny': 64, 'lx': 4., 'ly': 4.,
        'gravity_x': 0., 'gravity_y': -1., 'dt_max': .2,
        't_end': 100., 'output_every': .5,
        'checks': _PRESET_CHECKS + ('l1-decay', 'sandwich-n', 'grad-w-upper',
                                    'grad-w-decay', 'fluid-energy-decay'),
        'fits': ('linf_n:alg', 'c_max:alg'),
        'fit_window': (10., 100.),
    },
    'decay-rneg': {
        'preset': 'gauss-bump',
        'r': -1., 'mu': 1., 'chi': .5,
        'nx': 32, 'ny': 32, 'lx': 4., 'ly': 4.,
        'gravity_x': 0., 'gravity_y': -1., 'dt_max': .2,
        't_end': 10., 'output_every': .1,
        'checks': _PRESET_CHECKS + ('l1-decay',),
        'fits': ('mass:exp',), 'fit_window': (2., 10.),
    },
    'sweep-r1': {
        'preset': 'gauss-bump',
        'r': 1., 'mu': 8., 'chi': .5,
        'nx': 48, 'ny': 48, 'lx': 1., 'ly': 1.,
        'gravity_x': 0., 'gravity_y': -1.,
        't_end': 20., 'output_every': .1,
        'checks': ('positivity',),
        'fits': ('dev_inf:exp',), 'fit_window': (5., 20.),
    },
}


def _pick(cls, values: Mapping[str, Any]) -> Dict[str, Any]:
    return {f.name: values[f.name] for f in fields(cls) if f.name in values}


def make_config(mapping: Optional[Mapping[str, Any]] = None,
                scenario: Optional[str] = None) -> RunConfig:
    """Build a :class:`RunConfig` from raw key-value pairs.

    Parameters
    ----------
    mapping
        Keys of :data:`skchemo.io.config.SCHEMA`, values either raw strings
        or already converted.
    scenario
        Name of a scenario in :data:`SCENARIOS` to start from; overrides a
        ``scenario`` key of ``mapping``.

    Raises
    ------
    ConfigurationError
        On unknown keys, invalid values or an unknown scenario.

    """
    mapping = dict(mapping or {})
    if scenario is None:
        scenario = io.config.convert('scenario', mapping.get('scenario'))
    raw: Dict[str, Any] = {}
    if scenario is not None:
        if scenario not in SCENARIOS:
            raise ConfigurationError("Unknown scenario '{}', choose from {}."
                                     .format(scenario, ', '.join(SCENARIOS)))
        raw.update(SCENARIOS[scenario])
    raw.update(mapping)
    raw['scenario'] = scenario
    values = {key: io.config.convert(key, value)
              for key, value in raw.items()}

    try:
        nx = values.get('nx', 64)
        lx = values.get('lx', 1.)
        grid = Grid(nx, values.get('ny', nx), lx, values.get('ly', lx))
        fluid = FluidConfig(gravity=(values.get('gravity_x', 0.),
                                     values.get('gravity_y', 0.)),
                            **_pick(FluidConfig, values))
        params = SimParams(grid=grid,
                           fluid=fluid,
                           init=InitialData(**_pick(InitialData, values)),
                           **{k: v for k, v in _pick(SimParams, values).items()
                              if k not in ('grid', 'fluid', 'init')})
        return RunConfig(params=params,
                         **{k: v for k, v in _pick(RunConfig, values).items()
                            if k != 'params'})
    except ConfigurationError:
        raise
    except ValueError as e:
        raise ConfigurationError(str(e)) from e


# Time loop


def diagnostics_row(state: State, params: SimParams, dt: float = 0.) \
        -> DiagnosticsRow:
    """Evaluate the diagnostics of ``state``."""
    return DiagnosticsRow(
        state.t,
        dt,
        *norms(state, params),
        energy(state, params).f_value,
        float(np.max(np.abs(divergence(state.u).values))),
        state.clamped_mass,
    )


def _integrals(state: State) -> Tuple[float, float, float, float]:
    """Mass, integral of n^2, integral of w and of |grad w|^2."""
    area = state.grid.cell_area
    return (float(np.sum(state.n.values) * area),
            float(np.sum(state.n.values ** 2) * area),
            float(np.sum(state.w.values) * area),
            float(np.sum(gradient_squared(state.w).values) * area))


def _advance(state: State, params: SimParams, target: float) -> State:
    """One time step that does not jump over ``target``."""
    dt_cfl = cfl_dt(state, params)
    remaining = target - state.t
    if remaining <= dt_cfl * (1. + TIME_EPS):
        return replace(step_system(state, params, dt=remaining), t=target)
    if remaining < 2. * dt_cfl:
        # avoid a tiny last step before the output time
        return step_system(state, params, dt=.5 * remaining)
    return step_system(state, params)


def run(config: RunConfig) -> RunResult:
    """Integrate to ``t_end`` and evaluate the requested checks and fits.

    Diagnostics rows are recorded at t = 0, at every multiple of
    ``output_every`` and at ``t_end``; the time steps are shortened to land
    on these times exactly.  The table is written to ``out_path`` after the
    run, so that a failed run leaves no partial file.

    Raises
    ------
    ConfigurationError
        If ``out_path`` or ``vtk_path`` cannot be written.
    BlowUpError
        If the blow-up guard is triggered.
    SolverError
        If a linear solve does not converge.
    FitError
        If a requested fit is not possible on the produced series.

    """
    for path in (config.out_path, config.vtk_path):
        if path is not None:
            io.csv.check_writable(path)

    params = config.params
    t_end = params.t_end
    state = init_state(params)
    consts = derived_constants(state, params)
    rows = [diagnostics_row(state, params)]
    fluid = [fluid_energy_diagnostics(state, params)]
    records: List[StepRecord] = []
    logger.info("Starting %s: %s, chi=%g, r=%g, mu=%g, t_end=%g",
                config.scenario or 'run', params.grid, params.chi, params.r,
                params.mu, t_end)

    k = 1
    while state.t < t_end:
        target = k * config.output_every
        if target >= t_end * (1. - TIME_EPS):
            target = t_end
        mass, n_sq, w_mass, grad_w_sq = _integrals(state)
        try:
            new = _advance(state, params, target)
        except (BlowUpError, SolverError) as e:
            logger.warning("Run stopped at t = %.6g: %s", state.t, e)
            raise
        after = _integrals(new)
        records.append(StepRecord(t=new.t,
                                  dt=new.t - state.t,
                                  mass_before=mass,
                                  mass_after=after[0],
                                  n_sq_before=n_sq,
                                  w_mass_before=w_mass,
                                  w_mass_after=after[2],
                                  grad_w_sq_before=grad_w_sq,
                                  clamped=new.clamped_mass
                                  - state.clamped_mass,
                                  energy_f=energy(new, params).f_value))
        state = new
        if state.t == target:
            rows.append(diagnostics_row(state, params, records[-1].dt))
            fluid.append(fluid_energy_diagnostics(state, params))
            logger.info("t=%.6g steps=%d mass=%.6g dev_inf=%.3e "
                        "|u|^2=%.3e |grad u|^2=%.3e", state.t, state.steps,
                        rows[-1].mass, rows[-1].dev_inf, *fluid[-1])
            k += 1

    columns = {name: np.array([getattr(row, name) for row in rows])
               for name in DiagnosticsRow._fields}
    columns['fluid_energy'] = np.array([e for e, _ in fluid])
    columns['fluid_dissipation'] = np.array([d for _, d in fluid])
    series = _Series(columns, records, config, consts)
    checks = [CHECKS[name](series) for name in config.checks]
    for check in checks:
        if not check.passed:
            logger.warning("Check failed: %s", check)

    fits = []
    for spec in config.fits:
        column, _, model = spec.partition(':')
        fits.append(fit_decay(columns['t'], columns[column], model,
                              config.window))

    if config.out_path is not None:
        io.csv.to_file(config.out_path, DiagnosticsRow._fields, rows)
    if config.vtk_path is not None:
        to_vtk(state, config.vtk_path)

    return RunResult(rows, checks, fits, state, fluid)


# Sweeps


def _sweep_one(config: RunConfig) -> SweepRow:
    mu = config.params.mu
    try:
        result = run(config)
    except BlowUpError as e:
        logger.warning("mu = %g: %s", mu, e)
        return SweepRow(mu, False, np.nan, np.nan, str(e))
    except SolverError as e:
        logger.warning("mu = %g: %s", mu, e)
        return SweepRow(mu, True, np.nan, np.nan, str(e))
    t = [row.t for row in result.rows]
    dev_inf = [row.dev_inf for row in result.rows]
    try:
        rate = fit_decay(t, dev_inf, 'exponential', config.window).rate
        error = None
    except FitError as e:
        rate, error = np.nan, str(e)
    return SweepRow(mu, True, dev_inf[-1], rate, error)


def sweep_mu(base: RunConfig,
             mu_values: Sequence[float],
             workers: int = 1) -> List[SweepRow]:
    """Run ``base`` for each value of mu.

    The runs are independent and, for ``workers > 1``, executed in separate
    processes.  Failures are recorded in the rows; the result is sorted by
    mu and does not depend on the number of workers.

    """
    if len(mu_values) == 0:
        raise ConfigurationError("No values of mu given.")
    if workers < 1:
        raise ConfigurationError("workers must be positive.")
    configs = [replace(base,
                       params=replace(base.params, mu=float(mu)),
                       out_path=None,
                       vtk_path=None,
                       checks=(),
                       fits=())
               for mu in sorted(mu_values)]
    if workers == 1:
        return [_sweep_one(config) for config in configs]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(_sweep_one, configs))
