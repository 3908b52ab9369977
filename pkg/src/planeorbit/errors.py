"""Exception hierarchy shared by every module."""


class PlaneOrbitError(Exception):
    """Base class; carries an optional pipeline step for context."""

    def __init__(self, message="", *, step=None):
        super().__init__(message)
        self.step = step

    def __str__(self):
        msg = super().__str__()
        return f"[{self.step}] {msg}" if self.step else msg


class DivisionByZero(PlaneOrbitError, ZeroDivisionError):
    pass


class ZeroElement(PlaneOrbitError, ValueError):
    pass


class RootOfUnityInput(PlaneOrbitError, ValueError):
    pass


class FieldMismatch(PlaneOrbitError, TypeError):
    pass


class ZeroPolynomial(PlaneOrbitError, ValueError):
    pass


class NotAnAutomorphism(PlaneOrbitError, ValueError):
    pass


class PreconditionViolation(PlaneOrbitError, ValueError):
    pass


class EigenvalueOutsideField(PlaneOrbitError, ArithmeticError):
    """The linear part of an affine map does not split over the working field.

    ``charpoly`` holds the characteristic polynomial coefficients (constant
    term first) so the caller can rerun over an extension.
    """

    def __init__(self, message="", *, charpoly=None, step=None):
        super().__init__(message, step=step)
        self.charpoly = charpoly


class KindMismatch(PlaneOrbitError, ValueError):
    pass


class DegeneratePair(PlaneOrbitError, ValueError):
    pass


class ConstantPi(PlaneOrbitError, ValueError):
    pass


class PointOffVariety(PlaneOrbitError, ValueError):
    pass


class InternalVerificationFailure(PlaneOrbitError, AssertionError):
    pass


class Inconclusive(PlaneOrbitError):
    """A capped search ended without a sound answer."""


class ParseError(PlaneOrbitError, ValueError):
    def __init__(self, message, *, text="", pos=0, line=1, column=None):
        self.text = text
        self.pos = pos
        self.line = line
        self.column = pos + 1 if column is None else column
        super().__init__(f"{message} (line {self.line}, column {self.column})")
