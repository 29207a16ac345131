"""Exception hierarchy shared across the package."""


class ThermocoverError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(ThermocoverError):
    """Bad configuration value, unknown key, or unparsable config text."""


class NumericError(ThermocoverError):
    """Numerical failure: non-finite state, unstable step size, etc."""


class ConvergenceError(NumericError):
    """Iterative solver hit its iteration cap before reaching tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class IllConditionedFitError(ThermocoverError):
    """Identification problem lacks the excitation to pin down parameters."""

    def __init__(self, message, unidentifiable=()):
        super().__init__(message)
        self.unidentifiable = tuple(unidentifiable)
