"""Exception types raised by the library."""


class NewtpotError(Exception):
    """Base class for all library errors."""


class DomainError(NewtpotError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class UnsupportedOrderError(NewtpotError, ValueError):
    pass


class UnsupportedRegimeError(NewtpotError, ValueError):
    """The requested parameter regime is not covered by the root analysis."""


class BracketError(NewtpotError, RuntimeError):
    """No sign change was found inside a root-scan window."""

    def __init__(self, message, window=None):
        if window is not None:
            message = f"{message} (scan window [{window[0]:.6g}, {window[1]:.6g}])"
        super().__init__(message)
        self.window = window


class MeshError(NewtpotError, ValueError):
    pass


class AssemblyError(NewtpotError, RuntimeError):
    pass


class SolverError(NewtpotError, RuntimeError):
    pass


class StateError(NewtpotError, RuntimeError):
    pass


class PreconditionError(NewtpotError, ValueError):
    pass


class FitError(NewtpotError, ValueError):
    pass
