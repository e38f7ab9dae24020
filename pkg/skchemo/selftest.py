"""Acceptance suite of the simulator.

Each criterion evaluates one or more named properties on manufactured
solutions, closed form oracles or scenario runs and reports them without
timings, so that the report of two invocations is identical:

.. code-block:: bash

    python -m skchemo selftest --quick

"""

import logging
from contextlib import contextmanager, nullcontext
from functools import cached_property
from typing import Callable, Iterable, List, NamedTuple, Optional

import numpy as np

from skchemo.grid import (Grid, ScalarField, VectorField, divergence,
                          gradient, laplacian)
from skchemo.models import poisson
from skchemo.models.fluid import project
from skchemo.oracles import (fit_decay, logistic_solution,
                             ode_comparison_bound)
from skchemo.runner import RunResult, make_config, run, sweep_mu


logger = logging.getLogger(__name__)


class CriterionResult(NamedTuple):
    number: int
    name: str
    passed: bool
    detail: str


class SelftestReport(NamedTuple):
    results: List[CriterionResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failed(self) -> List[str]:
        return [r.name for r in self.results if not r.passed]

    def text(self) -> str:
        lines = ["{:>2d} {:<26s} {}  {}".format(r.number, r.name,
                                               'PASS' if r.passed else 'FAIL',
                                               r.detail)
                 for r in self.results]
        lines.append("{} of {} passed".format(
            sum(r.passed for r in self.results), len(self.results)))
        return '\n'.join(lines) + '\n'


@contextmanager
def flipped_stencil():
    """Temporarily flip the sign of the centre weight of the second
    difference, e.g. to check that the suite detects a broken operator."""
    saved = poisson.SECOND_DIFFERENCE
    west, centre, east = saved
    poisson.SECOND_DIFFERENCE = (west, -centre, east)
    poisson.clear_cache()
    try:
        yield
    finally:
        poisson.SECOND_DIFFERENCE = saved
        poisson.clear_cache()


def _order(hs, errors) -> float:
    return float(np.polyfit(np.log(hs), np.log(errors), 1)[0])


def convergence_orders(sizes=(32, 64, 128)):
    """Empirical orders of laplacian, gradient and divergence."""
    errors = {'laplacian': [], 'gradient': [], 'divergence': []}
    hs = []
    for m in sizes:
        grid = Grid.init_square(m)
        hs.append(grid.dx)
        X, Y = grid.cell_centers()
        f = ScalarField(grid, np.cos(np.pi * X) * np.cos(np.pi * Y))
        errors['laplacian'].append(np.max(np.abs(
            laplacian(f).values + 2. * np.pi ** 2 * f.values)))

        g = gradient(f)
        X1, Y1 = grid.x_faces()
        X2, Y2 = grid.y_faces()
        errors['gradient'].append(max(
            np.max(np.abs(g.u1 + np.pi * np.sin(np.pi * X1)
                          * np.cos(np.pi * Y1))),
            np.max(np.abs(g.u2 + np.pi * np.cos(np.pi * X2)
                          * np.sin(np.pi * Y2)))))

        v = VectorField(grid,
                        np.sin(np.pi * X1) * np.cos(np.pi * Y1),
                        np.cos(np.pi * X2) * np.sin(np.pi * Y2), 'none')
        errors['divergence'].append(np.max(np.abs(
            divergence(v).values
            - 2. * np.pi * np.cos(np.pi * X) * np.cos(np.pi * Y))))
    return {k: _order(hs, e) for k, e in errors.items()}


def projection_ratio(n: int = 64, seed: int = 0) -> float:
    """Relative divergence left by :func:`project` on random input."""
    grid = Grid.init_square(n)
    rng = np.random.default_rng(seed)
    v = VectorField(grid,
                    rng.standard_normal((n + 1, n)),
                    rng.standard_normal((n, n + 1)))
    out, _ = project(v)
    return float(np.max(np.abs(divergence(out).values))
                 / np.max(np.abs(divergence(v).values)))


class Suite:
    """The acceptance criteria sharing their scenario runs."""

    def __init__(self, quick: bool = False):
        self.quick = quick

    def _resolution(self, n: int):
        if self.quick:
            n //= 2
        return {'nx': n, 'ny': n}

    @cached_property
    def logistic(self) -> RunResult:
        return run(make_config({'t_end': 1., 'fits': (), 'fit_window': None,
                                'checks': ('positivity', 'max-principle',
                                           'logistic-oracle')},
                               scenario='logistic-uniform'))

    @cached_property
    def positive_r(self) -> RunResult:
        return run(make_config(self._resolution(64), scenario='thm12-r1'))

    @cached_property
    def zero_r(self) -> RunResult:
        return run(make_config(self._resolution(64), scenario='thm13-r0'))

    @staticmethod
    def _check(result: RunResult, name: str):
        for check in result.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    @staticmethod
    def _fit(result: RunResult, column: str, model: str = 'exponential'):
        t = [row.t for row in result.rows]
        values = [getattr(row, column) for row in result.rows]
        return fit_decay(t, values, model, (10., result.rows[-1].t))

    def criterion_1(self):
        for name, order in sorted(convergence_orders().items()):
            yield name + '-convergence', order >= 1.9, \
                "order={:.3f}".format(order)

    def criterion_2(self):
        ratio = projection_ratio()
        yield 'projection', ratio <= 1e-10, "ratio={:.3e}".format(ratio)

    def criterion_3(self):
        result = self.logistic
        t = result.rows[-1].t
        exact = logistic_solution(.5, 1., 1., t)
        error = abs(result.rows[-1].mass / result.state.grid.area - exact)
        spread = float(np.ptp(result.state.n.values))
        yield 'logistic-oracle', error <= 1e-3, "error={:.3e}".format(error)
        yield 'uniformity', spread <= 1e-12, "spread={:.3e}".format(spread)

    def criterion_4(self):
        runs = (('logistic', self.logistic), ('thm12', self.positive_r),
                ('thm13', self.zero_r))
        for scenario, result in runs:
            for name in ('positivity', 'max-principle'):
                check = self._check(result, name)
                label = "{}@{}".format(name, scenario)
                yield label, check.passed, "value={:.3e}".format(check.value)

    def criterion_5(self):
        check = self._check(self.zero_r, 'l1-decay')
        yield 'l1-decay', check.passed, \
            "max mass/bound={:.4f}".format(check.value)

    def criterion_6(self):
        result = self.positive_r
        dev = result.rows[-1].dev_inf
        yield 'equilibrium', dev <= 1e-3, "dev_inf={:.3e}".format(dev)
        fit = self._fit(result, 'dev_inf')
        yield 'dev-inf-rate', fit.rate > .05 and fit.r_squared >= .95, \
            "rate={:.4f} r2={:.4f}".format(fit.rate, fit.r_squared)
        for column in ('grad_w_l6', 'u_linf', 'c_max'):
            fit = self._fit(result, column)
            yield column.replace('_', '-') + '-rate', fit.rate > 0., \
                "rate={:.4f}".format(fit.rate)

    def criterion_7(self):
        check = self._check(self.positive_r, 'energy-monotone')
        yield 'energy-monotone', check.passed, \
            "max increase={:.3e}".format(check.value)

    def criterion_8(self):
        result = self.zero_r
        fit = self._fit(result, 'linf_n', 'algebraic')
        yield 'linf-n-exponent', (.75 <= fit.rate <= 1.25
                                  and fit.r_squared >= .9), \
            "exponent={:.4f} r2={:.4f}".format(fit.rate, fit.r_squared)
        for name in ('sandwich-n', 'grad-w-upper', 'grad-w-decay'):
            check = self._check(result, name)
            yield name, check.passed, "value={:.4g}".format(check.value)
        fit = self._fit(result, 'c_max', 'algebraic')
        yield 'c-max-exponent', fit.rate > 0., \
            "exponent={:.4f}".format(fit.rate)
        c_min = min(row.c_min for row in result.rows)
        yield 'c-min-positive', c_min > 0., "min={:.3e}".format(c_min)

    def criterion_9(self):
        config = make_config(self._resolution(48), scenario='sweep-r1')
        rows = sweep_mu(config, [.5, 2., 8., 32.])
        bounded = all(row.bounded for row in rows)
        yield 'sweep-bounded', bounded, ' '.join(
            "mu={:g}:{}".format(row.mu, 'ok' if row.bounded else 'blow-up')
            for row in rows)
        dev = [row.final_dev_inf for row in rows[1:]]
        yield 'sweep-monotone', bounded and bool(np.all(np.diff(dev) <= 0.)), \
            ' '.join("{:.3e}".format(d) for d in dev)

    def criterion_10(self):
        # logistic ODE residual
        t = np.linspace(.1, 10., 200)
        h = 1e-5
        worst = 0.
        for r, mu, n0 in ((1., 1., .5), (1., 2., 3.), (0., 1., 1.),
                          (-1., 1., .2)):
            y = logistic_solution(n0, r, mu, t)
            dy = (logistic_solution(n0, r, mu, t + h)
                  - logistic_solution(n0, r, mu, t - h)) / (2. * h)
            rhs = r * y - mu * y ** 2
            worst = max(worst, float(np.max(np.abs(dy - rhs)
                                            / np.maximum(np.abs(rhs), 1e-3))))
        yield 'logistic-ode', worst <= 1e-6, "residual={:.2e}".format(worst)

        # y' + y = h with h a unit pulse in every unit interval
        dt = 1e-3
        ts = np.arange(0., 20. + dt / 2, dt)
        y = np.empty_like(ts)
        y[0] = 2.
        for i in range(len(ts) - 1):
            pulse = 1. if (ts[i] % 1.) < .5 else 0.
            y[i + 1] = y[i] + dt * (pulse - y[i])
        bound = ode_comparison_bound(2., 1., .5, ts)
        yield 'ode-comparison', bool(np.all(y <= bound)), \
            "max y/bound={:.4f}".format(float(np.max(y / bound)))

        ts = np.arange(0., 20.05, .1)
        fit = fit_decay(ts, 5. * np.exp(-.3 * ts), 'exponential', (0., 20.))
        ok = abs(fit.rate - .3) <= 1e-10 and fit.r_squared == 1.
        ts = np.linspace(5., 50., 46)
        fit2 = fit_decay(ts, 2. / (ts + 1.), 'algebraic', (5., 50.))
        ok = ok and abs(fit2.rate - 1.) <= 1e-10
        yield 'fit-recovery', ok, "rate={:.12f} exponent={:.12f}".format(
            fit.rate, fit2.rate)


CRITERIA = tuple(range(1, 11))


def selftest(quick: bool = False,
             only: Optional[Iterable[int]] = None,
             mutate_stencil: bool = False) -> SelftestReport:
    """Evaluate the acceptance criteria.

    Parameters
    ----------
    quick
        Halve the resolution of the scenario runs.
    only
        Criterion numbers to evaluate, by default all.
    mutate_stencil
        Evaluate with the centre weight of the second difference flipped;
        the suite must then fail.

    """
    numbers = CRITERIA if only is None else sorted(set(only))
    for number in numbers:
        if number not in CRITERIA:
            raise ValueError("Unknown criterion {}.".format(number))
    suite = Suite(quick)
    results: List[CriterionResult] = []

    def evaluate(number: int, criterion: Callable):
        try:
            for name, passed, detail in criterion():
                results.append(CriterionResult(number, name, bool(passed),
                                               detail))
        except Exception as e:  # noqa
            logger.warning("Criterion %d raised %s", number, e)
            results.append(CriterionResult(number, 'criterion-{}'
                                           .format(number), False,
                                           "{}: {}".format(type(e).__name__,
                                                           e)))

    with flipped_stencil() if mutate_stencil else nullcontext():
        for number in numbers:
            evaluate(number, getattr(suite, 'criterion_{}'.format(number)))
    return SelftestReport(results)
