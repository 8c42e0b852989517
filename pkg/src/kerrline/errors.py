"""Exception hierarchy.

Every error carries the process exit code the command line tool maps it to.
"""


class KerrlineError(Exception):
    exit_code = 1


class ParameterError(KerrlineError, ValueError):
    """Invalid device parameter or configuration value."""

    exit_code = 2

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ConfigError(KerrlineError, ValueError):
    exit_code = 2


class ConvergenceError(KerrlineError, RuntimeError):
    """A numerical procedure did not reach its tolerance."""

    exit_code = 3


class PoleProximityError(ConvergenceError):
    """Residual requested too close to a cotangent pole."""


class BranchCountError(ConvergenceError):
    """Roots found per cotangent branch disagree with the sign-change analysis."""


class TruncationError(ConvergenceError):
    """The truncated mode product has not converged."""


class DimensionError(KerrlineError, ValueError):
    """Hilbert space larger than the configured guard."""

    exit_code = 2


class OracleError(KerrlineError, RuntimeError):
    """Exact diagonalization could not be matched to the effective model."""

    exit_code = 4
