"""Exception hierarchy for dp2online."""


class Dp2OnlineError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(Dp2OnlineError, ValueError):
    """An operation was called with inputs outside its domain."""


class EmptySampleError(PreconditionError):
    pass


class NonRealizableError(PreconditionError):
    """A distribution or sequence is not labeled by any concept in the class."""


class InfeasiblePoolError(Dp2OnlineError, OverflowError):
    """The requested expert pool exceeds the configured size ceiling."""


class CalibrationError(Dp2OnlineError, RuntimeError):
    """Sample-complexity search hit its ceiling without a passing m."""


class HorizonExhaustedError(Dp2OnlineError, RuntimeError):
    pass


class ProtocolError(Dp2OnlineError, RuntimeError):
    """Predict/update calls arrived out of order."""
