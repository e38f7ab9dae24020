r"""Logistic growth.

A uniform population in a uniform signal has no gradients to follow, so the
density stays uniform and solves the logistic equation

.. math::
    n' = n (r - \mu n),

whose solution is available in closed form.  This example drives the time
loop by hand with :func:`~skchemo.step_system` and compares the density with
:func:`~skchemo.logistic_solution`.

"""
import numpy as np

from skchemo import *

grid = Grid.init_square(16)
params = SimParams(grid, r=1., mu=1., dt_max=2.5e-3,
                   init=InitialData('uniform', n_base=.5))
state = init_state(params)

t_end = 2.
t, n = [0.], [state.n.max()]
while state.t < t_end - 1e-12:
    state = step_system(state, params, dt=t_end - state.t)
    t.append(state.t)
    n.append(state.n.max())

error = np.max(np.abs(np.array(n) - logistic_solution(.5, 1., 1., t)))
spread = np.ptp(state.n.values)

if __name__ == "__main__":
    from os.path import splitext
    from sys import argv
    from skchemo.io.meshio import to_file

    print("max error {:.3e}, spread {:.3e}".format(error, spread))
    to_file(state, splitext(argv[0])[0] + '_solution.vtk')
