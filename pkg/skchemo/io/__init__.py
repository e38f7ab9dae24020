"""Import and export of configurations, diagnostics tables and states."""

from . import config, csv  # noqa
