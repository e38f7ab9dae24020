"""Export states to any format supported by meshio."""

import meshio
import numpy as np

from skchemo.models.chemo import State, recover_c


def to_meshio(state: State) -> meshio.Mesh:
    """Convert the state into a quadrilateral :class:`meshio.Mesh`.

    The cell data are the density ``n``, the transformed signal ``w``, the
    signal ``c``, the pressure ``p`` and the ``speed`` |u| at the cell
    centers.

    """
    p, t = state.grid.quads()
    U1, U2 = state.u.cell_centered()
    fields = {
        'n': state.n.values,
        'w': state.w.values,
        'c': recover_c(state).values,
        'p': state.p.values,
        'speed': np.sqrt(U1 ** 2 + U2 ** 2),
    }
    return meshio.Mesh(p, [('quad', t)],
                       cell_data={k: [v.ravel()] for k, v in fields.items()})


def to_file(state: State, filename, **kwargs):
    meshio.write(filename, to_meshio(state), **kwargs)
