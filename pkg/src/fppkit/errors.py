"""Exception hierarchy shared by every module of the toolkit."""


class FppError(Exception):
    """Base class for all toolkit errors."""


# ring
class NonResidue(FppError, ValueError):
    pass


class EvenPrime(FppError, ValueError):
    pass


class NonUnit(FppError, ZeroDivisionError):
    pass


class ModulusMismatch(FppError, TypeError):
    pass


class DenominatorNotUnit(FppError, ZeroDivisionError):
    pass


class DivideByZero(FppError, ZeroDivisionError):
    pass


# poly
class PolySyntaxError(FppError, SyntaxError):
    """Parse failure carrying a 1-based line and column."""

    def __init__(self, msg, line=1, column=1, text=None):
        super().__init__(f"{msg} (line {line}, column {column})")
        self.msg = msg
        self.lineno = line
        self.offset = column
        self.text = text


class UnknownVariable(FppError, KeyError):
    pass


class CoefficientNotInRing(FppError, ValueError):
    pass


class ArityMismatch(FppError, ValueError):
    pass


class SingularMatrix(FppError, ValueError):
    pass


# exact linear algebra
class Inconsistent(FppError, ValueError):
    pass


# vgeom
class NotStabilized(FppError):
    pass


class SamplingExhausted(FppError):
    pass


class NotACurve(FppError, ValueError):
    pass


class SingularPoint(FppError, ValueError):
    pass


class NoLift(FppError):
    pass


class NotZeroDimensional(FppError, ValueError):
    pass


# lift
class SingularJacobian(FppError):
    pass


class UnderDeterminedWarning(UserWarning):
    """A correction step had free variables; they were set to zero."""


# recog
class DependentRows(FppError, ValueError):
    pass


class PrecisionTooLow(FppError):
    pass


class NotFound(FppError):
    def __init__(self, msg="no short relation found", index=None):
        super().__init__(msg if index is None else f"{msg} (index {index})")
        self.index = index


# search
class NotASurface(FppError, ValueError):
    pass


class HilbertNotConstant(FppError, ValueError):
    pass


class RecognitionFailed(FppError):
    pass


class LiftFailed(FppError):
    pass


class IncompatiblePattern(FppError, ValueError):
    pass


class NoEquivariantSolution(FppError):
    pass


class EmptyAnsatz(FppError):
    pass


# pipeline
class StageError(FppError):
    """A failure inside one stage of a multi-stage pipeline."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause
