"""Exception hierarchy shared by every module of the package."""


class VassError(Exception):
    """Base class for all errors raised by bavass."""


class ParseError(VassError):
    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class ValidationError(VassError, ValueError):
    pass


class NameCollision(ValidationError):
    pass


class NegativeCounter(VassError):
    def __init__(self, index: int):
        # 1-based counter index, as printed to users
        self.index = index
        super().__init__(f"counter {index} would become negative")


class WrongState(VassError):
    pass


class LetterOutsideAlphabet(VassError):
    pass


class AlphabetMismatch(VassError):
    pass


class EpsilonNotSupported(VassError):
    pass


class UnsupportedMode(VassError):
    pass


class DimensionNotZero(VassError):
    pass


class DimensionMismatch(VassError):
    pass


class NotDownwardMode(UnsupportedMode):
    pass


class IndexOutOfRange(VassError):
    pass


class ShapeError(VassError):
    pass


class PreconditionUnverified(VassError):
    pass


class SkeletonError(VassError):
    pass


class UnsupportedPeriods(VassError):
    pass


class CapTooLarge(VassError):
    pass


class TreeTooLarge(VassError):
    pass


class UnknownId(VassError, KeyError):
    def __str__(self):
        return Exception.__str__(self)
