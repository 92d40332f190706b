"""Exception hierarchy shared by all modules."""


class CSPError(Exception):
    """Base class for every error raised by this package."""


class InvalidInstance(CSPError, ValueError):
    pass


class LengthExceedsCapacity(InvalidInstance):
    pass


class NonPositive(InvalidInstance):
    pass


class DimensionMismatch(CSPError, ValueError):
    pass


class NTooLarge(CSPError, ValueError):
    pass


class MalformedSystem(CSPError, ValueError):
    pass


class EmptyColumnSet(CSPError, ValueError):
    pass


class Unrealizable(CSPError):
    pass


class NotDownwardClosed(CSPError, ValueError):
    pass


class OverlappingSets(CSPError, ValueError):
    pass


class PatternExplosion(CSPError):
    pass


class ConsistencyViolation(CSPError, AssertionError):
    """A proven bound was violated; this points at a solver bug."""


class KOutOfRange(CSPError, ValueError):
    pass


class NotMonotone(CSPError, ValueError):
    pass


class ParseError(CSPError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
