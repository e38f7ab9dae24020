"""Support for wildcard import."""

from skchemo.grid import *  # noqa
from skchemo.models.fluid import (FluidConfig, project, step_fluid,  # noqa
                                  kinetic_energy, fluid_energy_diagnostics)
from skchemo.models.chemo import (InitialData, SimParams, State,  # noqa
                                  init_state, step_system, cfl_dt,
                                  recover_c)
from skchemo.functionals import (H, energy, norms,  # noqa
                                 derived_constants)
from skchemo.oracles import (logistic_solution, l1_decay_bound,  # noqa
                             ode_comparison_bound, fit_decay,
                             two_sided_algebraic_check)
from skchemo.runner import (RunConfig, make_config, run,  # noqa
                            sweep_mu)
from skchemo.selftest import selftest  # noqa

from skchemo.grid import __all__ as all_grid


__all__ = all_grid + [  # noqa
    'FluidConfig',
    'project',
    'step_fluid',
    'kinetic_energy',
    'fluid_energy_diagnostics',
    'InitialData',
    'SimParams',
    'State',
    'init_state',
    'step_system',
    'cfl_dt',
    'recover_c',
    'H',
    'energy',
    'norms',
    'derived_constants',
    'logistic_solution',
    'l1_decay_bound',
    'ode_comparison_bound',
    'fit_decay',
    'two_sided_algebraic_check',
    'RunConfig',
    'make_config',
    'run',
    'sweep_mu',
    'selftest',
]
