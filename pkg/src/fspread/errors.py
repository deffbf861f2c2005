"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures onto its documented codes without a lookup table.
"""


class FspreadError(Exception):
    exit_code = 2


class UsageError(FspreadError):
    exit_code = 1


class MathPreconditionError(FspreadError, ValueError):
    """A mathematical precondition of an operation is violated."""

    exit_code = 2


class FalsifiedCheck(FspreadError):
    """A check that a theorem guarantees has failed."""

    exit_code = 3


# ffield
class CharacteristicTwo(MathPreconditionError):
    pass


class NotPrime(MathPreconditionError):
    pass


class NotIrreducible(MathPreconditionError):
    pass


class FieldMismatch(MathPreconditionError, TypeError):
    pass


class DivisionByZero(MathPreconditionError, ZeroDivisionError):
    pass


class NotASquare(MathPreconditionError):
    pass


# trig
class DegenerateLine(MathPreconditionError):
    pass


class NullLine(MathPreconditionError):
    pass


class NullProjectivePoint(MathPreconditionError):
    pass


class NullProjection(MathPreconditionError):
    def __init__(self, factor: str):
        super().__init__(f"projective spread undefined: {factor} vanishes")
        self.factor = factor


class DegenerateForm(MathPreconditionError):
    pass


# projective
class NeitherClassMatches(MathPreconditionError):
    pass


# pgraph
class NonUnitClass(MathPreconditionError):
    pass


class IndexOutOfRange(MathPreconditionError, IndexError):
    pass


class NotRegular(MathPreconditionError):
    pass


class SchemeViolation(FalsifiedCheck):
    pass


# census
class TooLarge(MathPreconditionError):
    pass


class MTooLarge(TooLarge):
    pass


class ExponentOutOfRange(MathPreconditionError):
    pass
