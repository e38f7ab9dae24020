"""Exceptions raised by the simulator."""

from typing import Optional


class ConfigurationError(ValueError):
    """Invalid configuration key, value, preset or output path."""


class RegimeError(ValueError):
    """A functional was requested outside of its parameter regime."""


class FitError(ValueError):
    """A decay fit cannot be computed from the given series."""


class SolverError(RuntimeError):
    """An iterative linear solver did not reach its tolerance."""

    def __init__(self,
                 message: str,
                 residual: float,
                 tolerance: float,
                 iterations: Optional[int] = None):
        super().__init__("{} (residual {:.3e}, tolerance {:.3e})"
                         .format(message, residual, tolerance))
        self.residual = residual
        self.tolerance = tolerance
        self.iterations = iterations


class BlowUpError(RuntimeError):
    """The population density exceeded the blow-up guard."""

    def __init__(self, t: float, value: float, threshold: float):
        super().__init__("possible blow-up at t = {:.6g}: max n = {:.6g} "
                         "exceeds {:.6g}".format(t, value, threshold))
        self.t = t
        self.value = value
        self.threshold = threshold
