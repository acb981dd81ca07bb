"""Exception hierarchy shared by all modules."""


class MQKError(Exception):
    """Base class for every error raised by :mod:`mqk`."""


class RingMismatch(MQKError):
    pass


class TruncationMismatch(MQKError):
    pass


class NonDivisible(MQKError):
    """Exact division was requested but the quotient does not exist."""


class NotIntegral(MQKError):
    """A value falls outside the requested coefficient ring."""


class NoRingMap(MQKError):
    pass


class LogUnavailable(MQKError):
    pass


class PreconditionViolated(MQKError):
    pass


class HalfUnavailable(MQKError):
    pass


class NotIdempotent(MQKError):
    pass


class NotHomogeneous(MQKError):
    pass


class ParseError(MQKError):
    pass
