"""Exception types shared across the package."""


class PPVerifyError(ValueError):
    """Base class for all library errors."""


class NotAPrimePower(PPVerifyError):
    pass


class TooLarge(PPVerifyError):
    pass


class CapExceeded(PPVerifyError):
    pass


class ContextMismatch(PPVerifyError):
    """Raised when elements of different field contexts are combined."""


class DivisionByZero(PPVerifyError, ZeroDivisionError):
    pass


class ExponentOverflow(PPVerifyError, OverflowError):
    pass


class Degenerate(PPVerifyError):
    """Raised for a Mobius map with vanishing determinant."""


class InvalidDivisor(PPVerifyError):
    pass


class SpecViolation(PPVerifyError):
    """A family specification falls outside the hypotheses of its family."""


class PreconditionFailed(PPVerifyError):
    pass


class ParseError(PPVerifyError):
    pass
