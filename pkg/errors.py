class QMemError(Exception):
    """Base class for errors raised by the memory simulator."""


class ConfigError(QMemError):
    """Scenario configuration could not be parsed or is inconsistent."""

    exit_code = 2


class NumericalGuardError(QMemError):
    """A numerical sanity check tripped (step size, efficiency > 1, ...)."""

    exit_code = 3


class ResolutionError(NumericalGuardError):
    """The integration step does not resolve the fastest rate."""
