"""Exception hierarchy.

Everything raised on bad input derives from :class:`DataError` so the CLI can
map it to a single exit code.  Oracle refusals derive from
:class:`BudgetExceeded`.
"""


class GeoSketchError(Exception):
    pass


class DataError(GeoSketchError, ValueError):
    """Input stream violates an operation's precondition."""


class ParseError(DataError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class RangeError(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class FatnessViolation(DataError):
    pass


class UniverseTooLarge(DataError):
    pass


class NonIntegerCorner(DataError):
    pass


class EmptyInput(DataError):
    pass


class EmptyStream(EmptyInput):
    pass


class NotSorted(DataError):
    pass


class UnsortedInput(NotSorted):
    def __init__(self, position: int):
        self.position = position
        super().__init__(f"stream not sorted at position {position}")


class LengthMismatch(DataError):
    pass


class IndexOutOfRange(DataError):
    pass


class EmptySketch(GeoSketchError):
    pass


class ErodedEmpty(GeoSketchError):
    pass


class Infeasible(GeoSketchError):
    pass


class PassBudgetExceeded(GeoSketchError):
    def __init__(self, passes: int):
        self.passes = passes
        super().__init__(f"stopping rule did not fire within {passes} passes")


class BudgetExceeded(GeoSketchError):
    pass
