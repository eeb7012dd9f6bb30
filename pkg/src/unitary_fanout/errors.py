"""Exception types shared across the package."""


class FanoutError(Exception):
    """Base class for all errors raised by unitary_fanout."""


class ZeroVector(FanoutError, ValueError):
    pass


class NonPositivePower(FanoutError, ValueError):
    pass


class CalibrationLengthMismatch(FanoutError, ValueError):
    pass


class IndexOutOfRange(FanoutError, IndexError):
    pass


class MalformedSettings(FanoutError, ValueError):
    pass


class DimensionMismatch(FanoutError, ValueError):
    pass


class InvalidEfficiency(FanoutError, ValueError):
    pass


class DegenerateFit(FanoutError, ValueError):
    pass


class UnknownPreset(FanoutError, KeyError):
    pass


class ParseError(FanoutError, ValueError):
    pass
