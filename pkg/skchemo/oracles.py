"""Reference solutions, bound checks and decay fits.

The checks return :class:`BoundCheck` records instead of raising so that a
run can report every property it was asked to verify:

>>> from skchemo.oracles import logistic_solution, fit_decay
>>> logistic_solution(1., 0., 1., 1.)
0.5
>>> import numpy as np
>>> t = np.linspace(5., 50., 100)
>>> round(fit_decay(t, 2. / (t + 1.), 'algebraic', (5., 50.)).rate, 9)
1.0

"""

from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy import ndarray

from skchemo.errors import FitError
from skchemo.functionals import DerivedConstants


#: Minimum number of samples in a fit window.
MIN_SAMPLES = 10

MODELS = {
    'exponential': 'exponential',
    'exp': 'exponential',
    'algebraic': 'algebraic',
    'alg': 'algebraic',
}


class DecayFit(NamedTuple):
    """Least squares fit of A exp(-rate t) or A (t + 1)^(-rate)."""

    model: str
    rate: float
    amplitude: float
    r_squared: float
    window: Tuple[float, float]
    samples: int


class BoundCheck(NamedTuple):
    """Outcome of an inequality check over a series."""

    name: str
    satisfied_fraction: float
    worst_violation: float
    slack: float
    value: float  #: the measured statistic, e.g. a ratio or a final value
    window_ratio: Optional[float] = None  #: max / min of v (t + 1), if used

    @property
    def passed(self) -> bool:
        return bool(self.worst_violation <= self.slack)

    def __str__(self):
        text = "{:<20s} {} value={:.6g} worst={:.3g} slack={:.3g}".format(
            self.name, 'PASS' if self.passed else 'FAIL', self.value,
            self.worst_violation, self.slack)
        if self.window_ratio is not None:
            text += " window_ratio={:.6g}".format(self.window_ratio)
        return text


def logistic_solution(n0, r: float, mu: float, t):
    """Solution of y' = y (r - mu y), y(0) = n0.

    Evaluated without overflow for large |r t|; nonnegative for n0 >= 0.

    """
    n0 = np.asarray(n0, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    if np.any(n0 < 0.) or not mu > 0:
        raise ValueError("logistic_solution requires n0 >= 0 and mu > 0.")
    if r == 0.:
        out = n0 / (1. + mu * n0 * t)
    else:
        with np.errstate(over='ignore'):
            out = n0 / (np.exp(-r * t) - mu * n0 / r * np.expm1(-r * t))
    if out.ndim == 0:
        return float(out)
    return out


def l1_decay_bound(consts: DerivedConstants, mu: float, t):
    """Upper bound |Omega| / (mu (t + gamma)) of the mass for r <= 0."""
    return consts.area / (mu * (np.asarray(t, dtype=np.float64)
                                + consts.gamma))


def ode_comparison_bound(y0: float, a: float, b: float, t, t0: float = 0.):
    """Bound exp(-a (t - t0)) y0 + b / (1 - exp(-a)) for y' + a y <= h.

    Here ``b`` bounds the integral of h over any unit time interval.

    """
    if not a > 0 or b < 0 or y0 < 0:
        raise ValueError("ode_comparison_bound requires a > 0, b >= 0 and "
                         "y0 >= 0.")
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < t0):
        raise ValueError("ode_comparison_bound requires t >= t0.")
    return np.exp(-a * (t - t0)) * y0 - b / np.expm1(-a)


def _window(times: Sequence[float],
            values: Sequence[float],
            window: Tuple[float, float]) -> Tuple[ndarray, ndarray]:
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if times.shape != values.shape:
        raise ValueError("times and values differ in length.")
    t0, t1 = window
    if not t1 > t0:
        raise FitError("Empty window [{}, {}].".format(t0, t1))
    ix = (times >= t0) & (times <= t1)
    if not np.any(ix):
        raise FitError("No samples in the window [{}, {}].".format(t0, t1))
    return times[ix], values[ix]


def fit_decay(times: Sequence[float],
              values: Sequence[float],
              model: str,
              window: Tuple[float, float]) -> DecayFit:
    """Fit an exponential or algebraic decay by least squares in log space.

    The exponential model regresses ln v on t and the algebraic model ln v on
    ln(t + 1); ``rate`` is the negated slope.

    Raises
    ------
    FitError
        If the window holds fewer than ten samples or a nonpositive value.

    """
    if model not in MODELS:
        raise ValueError("Unknown decay model '{}'.".format(model))
    model = MODELS[model]
    t, v = _window(times, values, window)
    if len(t) < MIN_SAMPLES:
        raise FitError("At least {} samples are required in the window, "
                       "got {}.".format(MIN_SAMPLES, len(t)))
    if np.any(v <= 0.) or not np.all(np.isfinite(v)):
        raise FitError("Nonpositive values in the window; shrink the "
                       "window.")

    x = t if model == 'exponential' else np.log(t + 1.)
    y = np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    if np.ptp(y) <= 1e-12 * max(1., float(np.max(np.abs(y)))):
        # constant series
        r_squared = 1.
    else:
        r_squared = min(max(1. - ss_res / ss_tot, 0.), 1.)

    return DecayFit(model=model,
                    rate=float(-slope),
                    amplitude=float(np.exp(intercept)),
                    r_squared=r_squared,
                    window=(float(window[0]), float(window[1])),
                    samples=len(t))


def two_sided_algebraic_check(times: Sequence[float],
                              values: Sequence[float],
                              window: Tuple[float, float],
                              ratio_cap: float = 25.,
                              name: str = 'sandwich') -> BoundCheck:
    """Check C1 / (t + 1) <= v <= C2 / (t + 1) with C2 / C1 <= ratio_cap.

    The statistic is the ratio of the largest to the smallest value of
    ``v (t + 1)`` over the window.

    """
    t, v = _window(times, values, window)
    m = v * (t + 1.)
    if np.min(m) <= 0.:
        return BoundCheck(name, 0., np.inf, 0., np.inf)
    ratio = float(np.max(m) / np.min(m))
    centre = np.sqrt(np.max(m) * np.min(m))
    half = np.sqrt(ratio_cap)
    inside = (m >= centre / half) & (m <= centre * half)
    return BoundCheck(name=name,
                      satisfied_fraction=float(np.mean(inside)),
                      worst_violation=max(ratio / ratio_cap - 1., 0.),
                      slack=0.,
                      value=ratio)


def algebraic_upper_check(times: Sequence[float],
                          values: Sequence[float],
                          window: Tuple[float, float],
                          ratio_cap: float = 50.,
                          name: str = 'algebraic-upper') -> BoundCheck:
    """Check v <= C / (t + 1) on the window.

    The constant is calibrated on the samples up to the start of the window:
    the statistic is the supremum of ``v (t + 1)`` over the window divided by
    its supremum over the earlier samples.  The spread of ``v (t + 1)``
    inside the window is reported as ``window_ratio``; it stays bounded for
    decay like 1 / (t + 1) and grows with the window for slower decay.

    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    t, v = _window(times, values, window)
    m = v * (t + 1.)
    early = times <= window[0]
    if np.any(early):
        reference = float(np.max(values[early] * (times[early] + 1.)))
    else:
        reference = float(m[0])
    if not reference > 0:
        return BoundCheck(name, 0., np.inf, 0., np.inf)
    ratio = float(np.max(m) / reference)
    spread = float(np.max(m) / np.min(m)) if np.min(m) > 0. else np.inf
    return BoundCheck(name=name,
                      satisfied_fraction=float(np.mean(m <= ratio_cap
                                                       * reference)),
                      worst_violation=max(ratio / ratio_cap - 1., 0.),
                      slack=0.,
                      value=ratio,
                      window_ratio=spread)


def upper_bound_check(name: str,
                      values: Sequence[float],
                      bounds: Sequence[float],
                      slack: float = 0.) -> BoundCheck:
    """Check values <= bounds up to the relative ``slack``.

    The violation of a sample is (value - bound) / bound.

    """
    v = np.atleast_1d(np.asarray(values, dtype=np.float64))
    b = np.broadcast_to(np.asarray(bounds, dtype=np.float64), v.shape)
    if v.size == 0:
        raise ValueError("No values to check.")
    if np.any(b <= 0.):
        raise ValueError("Bounds must be positive.")
    violation = (v - b) / b
    return BoundCheck(name=name,
                      satisfied_fraction=float(np.mean(violation <= slack)),
                      worst_violation=max(float(np.max(violation)), 0.),
                      slack=slack,
                      value=float(np.max(v / b)))


def monotone_check(name: str,
                   times: Sequence[float],
                   values: Sequence[float],
                   window: Optional[Tuple[float, float]] = None,
                   tol: float = 0.) -> BoundCheck:
    """Check that successive increments of a series are at most ``tol``.

    Unlike the other checks the violation is absolute: the statistic is the
    largest increment between consecutive samples in the window.

    """
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if window is None:
        window = (times[0], times[-1])
    _, v = _window(times, values, window)
    if len(v) < 2:
        return BoundCheck(name, 1., 0., tol, 0.)
    increments = np.diff(v)
    largest = float(np.max(increments))
    return BoundCheck(name=name,
                      satisfied_fraction=float(np.mean(increments <= tol)),
                      worst_violation=max(largest, 0.),
                      slack=tol,
                      value=largest)
