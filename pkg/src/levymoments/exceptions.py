"""Exception hierarchy shared by all modules."""


class LevyError(Exception):
    """Base class for errors raised by levymoments."""


class DomainError(LevyError, ValueError):
    """An argument lies outside the domain of the operation."""


class QuadratureError(LevyError, ArithmeticError):
    """Numerical integration did not reach the requested tolerance.

    Attributes
    ----------
    achieved : float
        Error estimate reported by the integrator.
    """

    def __init__(self, message, achieved=float("nan")):
        super().__init__(f"{message} (achieved error estimate {achieved:.3g})")
        self.achieved = achieved


class DivergentIntegralError(LevyError, ArithmeticError):
    """An integral against the Lévy measure is infinite or undefined."""


class MomentNotFiniteError(LevyError, ValueError):
    """The requested moment of the process is infinite."""


class UnsupportedOperationError(LevyError, NotImplementedError):
    """The family does not support the operation (e.g. no sampler)."""


class NotCoveredError(LevyError):
    """No known small-time bound covers the requested (process, p, convention) combination."""


class ConfigError(LevyError, ValueError):
    """An experiment configuration failed validation."""
