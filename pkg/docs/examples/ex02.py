r"""Decay without growth.

For :math:`r = 0` there is no source and the quadratic death term removes
mass at a rate bounded below by the Cauchy--Schwarz inequality, hence

.. math::
    \int_\Omega n \,\mathrm{d}x \leq \frac{|\Omega|}{\mu (t + \gamma)},
    \quad \gamma = \frac{|\Omega|}{\mu \int_\Omega n_0 \,\mathrm{d}x}.

The run below starts from a Gaussian bump under gravity on a coarse grid and
evaluates the named checks of :mod:`skchemo.runner` on the result.

"""
import numpy as np

from skchemo import *

config = make_config({'nx': 16, 'ny': 16, 't_end': 5., 'output_every': .25,
                      'fits': (), 'fit_window': (1., 5.),
                      'checks': ('positivity', 'mass-identity', 'l1-decay')},
                     scenario='thm13-r0')
result = run(config)

t = np.array([row.t for row in result.rows])
mass = np.array([row.mass for row in result.rows])
consts = derived_constants(init_state(config.params), config.params)
ratio = np.max(mass / l1_decay_bound(consts, config.params.mu, t))

if __name__ == "__main__":
    for check in result.checks:
        print(check)
    print("max mass / bound = {:.4f}".format(ratio))
