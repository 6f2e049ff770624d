"""Exception types shared across the package."""


class ZeemanProbeError(Exception):
    """Base class for all package errors."""


class InputError(ZeemanProbeError, ValueError):
    """Invalid physical input: bad quantum numbers, malformed config, ..."""


class SolverError(ZeemanProbeError, RuntimeError):
    """A linear solve failed or did not reach the required residual."""
