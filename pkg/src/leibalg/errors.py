"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ``InputError`` subclasses give 2,
``ResourceGuard`` subclasses give 3.
"""

from __future__ import annotations


class LeibalgError(Exception):
    """Base class for every error raised by this package."""


class InputError(LeibalgError, ValueError):
    """Bad user-supplied data."""


class ResourceGuard(LeibalgError):
    """A computation refused because it would be infinite or too large."""


# exactfield
class MalformedSpec(InputError):
    pass


class CompositeModulus(MalformedSpec):
    def __init__(self, p: int):
        super().__init__(f"modulus {p} is not prime")
        self.p = p


class FieldMismatch(InputError):
    pass


class DivisionByZero(LeibalgError, ZeroDivisionError):
    pass


class InfiniteField(ResourceGuard):
    pass


# linalg
class DimensionMismatch(InputError):
    pass


class SingularMatrix(LeibalgError, ArithmeticError):
    pass


class EmptyAmbient(InputError):
    pass


# leibniz
class ShapeMismatch(InputError):
    pass


class ZeroLambda(InputError):
    pass


class NotLeibniz(LeibalgError):
    pass


# autgroup
class SingularParams(InputError):
    pass


class FieldTooLarge(ResourceGuard):
    pass


class ShapeUnsupported(LeibalgError):
    pass


class NotInFamily(LeibalgError):
    pass


class SingularInput(InputError):
    pass


class NotFactorable(LeibalgError):
    pass


# grouptool
class NotAGroup(LeibalgError):
    pass


class NotSubset(LeibalgError):
    pass


class PartialMap(LeibalgError):
    pass
