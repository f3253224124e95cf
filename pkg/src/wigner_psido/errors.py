"""Exception types shared across the package.

Each maps onto one CLI exit code (see :mod:`wigner_psido.cli`).
"""


class WignerPsidoError(Exception):
    """Base class for all package errors."""


class DomainError(WignerPsidoError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class ConfigError(WignerPsidoError, ValueError):
    """A truncation or experiment configuration is inconsistent."""


class UnsupportedError(ConfigError):
    """The requested operation is not available for this potential/state."""


class AccuracyError(WignerPsidoError, ArithmeticError):
    """A convergence self-check failed.

    ``delta`` holds the change observed under refinement.
    """

    def __init__(self, message, delta=float("nan")):
        super().__init__(message)
        self.delta = delta


class AdvisoryWarning(UserWarning):
    """Emitted when a parameter-selection criterion does not apply."""
