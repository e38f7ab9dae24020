"""Read run configurations from flat ``key = value`` text files.

Example::

    # algebraic decay without growth
    scenario = thm13-r0
    nx = 32
    ny = 32
    checks = l1-decay, sandwich-n

Lines starting with ``#`` and blank lines are ignored.  Values are converted
with :data:`SCHEMA`; unknown keys are an error.

"""

from os import PathLike
from typing import Any, Callable, Dict, Mapping, Tuple, Union

from skchemo.errors import ConfigurationError


def _bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ('1', 'true', 'yes', 'on'):
        return True
    if text in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError("not a boolean: '{}'".format(value))


def _optional_int(value: Any):
    if value is None or str(value).strip().lower() in ('', 'none'):
        return None
    return int(value)


def _optional_str(value: Any):
    if value is None or str(value).strip().lower() in ('', 'none'):
        return None
    return str(value).strip()


def _names(value: Any) -> Tuple[str, ...]:
    if isinstance(value, (tuple, list)):
        return tuple(str(v).strip() for v in value)
    return tuple(v.strip() for v in str(value).split(',') if v.strip())


def _pair(value: Any) -> Tuple[float, float]:
    if isinstance(value, (tuple, list)):
        items = list(value)
    else:
        items = [v for v in str(value).split(',') if v.strip()]
    if len(items) != 2:
        raise ValueError("expected two comma separated numbers")
    return float(items[0]), float(items[1])


def _optional_pair(value: Any):
    if value is None or str(value).strip().lower() in ('', 'none'):
        return None
    return _pair(value)


SCHEMA: Dict[str, Callable[[Any], Any]] = {
    # grid
    'nx': int,
    'ny': int,
    'lx': float,
    'ly': float,
    # model
    'chi': float,
    'r': float,
    'mu': float,
    'energy_a': float,
    # time stepping
    't_end': float,
    'dt_safety': float,
    'dt_max': float,
    # initial data
    'preset': str,
    'n_base': float,
    'n_amp': float,
    'sigma': float,
    'c_amp': float,
    'c_tilt': float,
    'u_amp': float,
    # fluid
    'include_convection': _bool,
    'gravity_x': float,
    'gravity_y': float,
    'poisson_tol': float,
    'poisson_max_iter': _optional_int,
    # run
    'scenario': _optional_str,
    'output_every': float,
    'out_path': _optional_str,
    'vtk_path': _optional_str,
    'seed': int,
    'checks': _names,
    'fits': _names,
    'fit_window': _optional_pair,
}


def convert(key: str, value: Any) -> Any:
    """Convert a raw value of the given key.

    Raises
    ------
    ConfigurationError
        If the key is unknown or the value does not convert.

    """
    if key not in SCHEMA:
        raise ConfigurationError("Unknown configuration key '{}'."
                                 .format(key))
    try:
        return SCHEMA[key](value)
    except (TypeError, ValueError) as e:
        raise ConfigurationError("Invalid value '{}' for '{}': {}"
                                 .format(value, key, e)) from e


def parse(text: str, source: str = '<string>') -> Dict[str, str]:
    """Split configuration text into raw key-value pairs."""
    out: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise ConfigurationError("{}:{}: expected 'key = value', got "
                                     "'{}'.".format(source, lineno, line))
        key, value = (s.strip() for s in line.split('=', 1))
        if key not in SCHEMA:
            raise ConfigurationError("{}:{}: unknown key '{}'."
                                     .format(source, lineno, key))
        out[key] = value
    return out


def parse_overrides(items) -> Dict[str, str]:
    """Parse ``key=value`` command line overrides."""
    return parse('\n'.join(items), source='--set')


def from_file(filename: Union[str, PathLike]) -> Dict[str, str]:
    try:
        with open(filename, 'r', encoding='utf-8') as handle:
            text = handle.read()
    except OSError as e:
        raise ConfigurationError("Cannot read configuration file '{}': {}"
                                 .format(filename, e)) from e
    return parse(text, source=str(filename))


def to_text(mapping: Mapping[str, Any]) -> str:
    """Format a mapping as configuration text, keys in schema order."""
    lines = []
    for key in SCHEMA:
        if key not in mapping or mapping[key] is None:
            continue
        value = mapping[key]
        if isinstance(value, (tuple, list)):
            value = ', '.join(str(v) for v in value)
        lines.append("{} = {}".format(key, value))
    return '\n'.join(lines) + '\n'
