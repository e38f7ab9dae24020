r"""Chemotaxis in a stirred fluid.

The population starts as a bump in a cellular vortex and sinks under
gravity while the logistic source drives it towards :math:`r / \mu`.  For
:math:`r > 0` the functional

.. math::
    \mathcal{F}(n, w) = \int_\Omega n \ln \frac{\mu n}{e r} + \frac{r}{\mu}
    \,\mathrm{d}x + \frac{\chi}{2} \int_\Omega |\nabla w|^2 \,\mathrm{d}x

decays along solutions.  The rows of the run hold it in ``energy_f``.

"""
from skchemo import *

config = make_config({'nx': 16, 'ny': 16, 't_end': 1., 'fits': (),
                      'fit_window': None,
                      'checks': ('positivity', 'mass-identity',
                                 'w-mass-balance')},
                     scenario='thm12-r1')
result = run(config)

energy_f = [row.energy_f for row in result.rows]
speed = [row.u_linf for row in result.rows]
div_residual = max(row.div_residual for row in result.rows)

if __name__ == "__main__":
    from os.path import splitext
    from sys import argv
    from skchemo.io.meshio import to_file

    for check in result.checks:
        print(check)
    print("F: {:.4e} -> {:.4e}".format(energy_f[0], energy_f[-1]))
    to_file(result.state, splitext(argv[0])[0] + '_solution.vtk')
