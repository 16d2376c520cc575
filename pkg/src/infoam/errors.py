"""Exception hierarchy shared by every module."""


class InfoamError(Exception):
    """Base class for all package errors."""


class InputError(InfoamError, ValueError):
    """Malformed user input (files, flags, out-of-range parameters)."""


class NonPositiveRadius(InputError):
    pass


class InfeasibleGeometry(InputError):
    pass


class SolverError(InfoamError):
    """A numerical procedure failed to produce a state."""


class NoConvergence(SolverError):
    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (final residual {residual:.3e})")
        self.residual = residual


class InvalidVariant(SolverError):
    def __init__(self, message, reason=""):
        super().__init__(message)
        self.reason = reason


class UnsupportedVariant(SolverError):
    pass


class NoBlockedState(SolverError):
    pass


class VolumeCollapse(SolverError):
    pass


class EmptyTrace(InputError):
    pass


class NonMonotonicTime(InputError):
    pass


class ZeroInputEnergy(InputError):
    pass


class InsufficientData(InputError):
    pass


class DegenerateFit(InputError):
    pass


class DuplicatePressure(InputError):
    pass


class MalformedCode(InputError):
    def __init__(self, token, reason=""):
        msg = f"malformed operation code token {token!r}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.token = token
