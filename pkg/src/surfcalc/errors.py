"""Exception hierarchy shared by the engine, the DSL and the CLI."""


class SurfcalcError(Exception):
    """Base class for every error raised by the engine."""


class UsageError(SurfcalcError, ValueError):
    """Malformed input: dimension mismatch, unknown name, bad precondition."""


class UnsupportedConfiguration(SurfcalcError):
    """The requested blow-up center is not a transverse simple point."""


class ObstructionNotComputable(SurfcalcError):
    """A restriction needs the Pic0 class of an anonymous point.

    The degree is still known and is carried on the exception.
    """

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class CertificateInvalid(SurfcalcError):
    """A nef certificate does not decompose the divisor it claims to."""


class NotContractible(SurfcalcError):
    """The Gram matrix of a proposed contraction is not negative definite."""


class NotDescendable(SurfcalcError):
    """A divisor meets a contracted curve with nonzero intersection."""
