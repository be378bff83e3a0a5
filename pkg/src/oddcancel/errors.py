"""Exception hierarchy shared by every layer of the engine."""


class OddCancelError(Exception):
    """Base class for all engine errors."""


class ContextError(OddCancelError):
    """Operands live in different rings or at different truncations."""


class NotInvertibleError(OddCancelError):
    """Constant term of a series is not a unit."""


class DomainError(OddCancelError):
    """Argument outside the domain of exp/log or of a numerical routine."""


class ConfigurationError(OddCancelError):
    """Unsupported combination of options."""


class ModularityViolation(OddCancelError):
    """Decomposition in the modular basis leaves a nonzero residual."""


class CertificationError(OddCancelError):
    """A quantity that must vanish (h_0) came out nonzero."""


class VerificationFailure(OddCancelError):
    """Two sides of an emitted identity disagree."""

    def __init__(self, message, diff=None):
        super().__init__(message)
        self.diff = diff


class UnsupportedExpression(OddCancelError):
    """Bundle expression has no Chern character in the model."""


class PrecisionError(OddCancelError):
    """Numerical evaluation could not reach the requested tolerance."""
