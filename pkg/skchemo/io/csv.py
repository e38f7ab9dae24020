"""Diagnostics tables as comma separated values.

Numbers are written in scientific notation with 17 significant digits so
that the values read back are bit-identical to the ones written.

"""

import os
from os import PathLike
from typing import Dict, Sequence, Union

import numpy as np

from skchemo.errors import ConfigurationError


FMT = '%.16e'


def check_writable(filename: Union[str, PathLike]):
    """Raise ConfigurationError if ``filename`` cannot be created."""
    path = os.fspath(filename)
    parent = os.path.dirname(os.path.abspath(path))
    if os.path.isdir(path):
        raise ConfigurationError("Output path '{}' is a directory."
                                 .format(path))
    if not os.path.isdir(parent):
        raise ConfigurationError("Directory of the output path '{}' does "
                                 "not exist.".format(path))
    if not os.access(parent, os.W_OK) or (os.path.exists(path)
                                          and not os.access(path, os.W_OK)):
        raise ConfigurationError("Output path '{}' is not writable."
                                 .format(path))


def to_file(filename: Union[str, PathLike],
            header: Sequence[str],
            rows: Sequence[Sequence[float]]):
    data = np.asarray(rows, dtype=np.float64).reshape(-1, len(header))
    np.savetxt(filename, data, fmt=FMT, delimiter=',',
               header=','.join(header), comments='')


def from_file(filename: Union[str, PathLike]) -> Dict[str, np.ndarray]:
    """Read a table written by :func:`to_file` into named columns."""
    try:
        with open(filename, 'r', encoding='utf-8') as handle:
            header = handle.readline().strip().split(',')
            data = np.loadtxt(handle, delimiter=',', ndmin=2)
    except OSError as e:
        raise ConfigurationError("Cannot read '{}': {}"
                                 .format(filename, e)) from e
    if data.size and data.shape[1] != len(header):
        raise ValueError("Malformed table '{}'.".format(filename))
    data = data.reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}
