"""Exact scalars over prime fields GF(p) and the rationals.

A :class:`Field` is a small immutable value. Elements are
:class:`FieldElement` instances carrying their field; the raw value is an
``int`` in ``[0, p)`` for GF(p) and a reduced :class:`fractions.Fraction`
for the rationals.

Matrix and algebra code works on the raw values directly through
:meth:`Field.norm` and :meth:`Field.inv_raw` to avoid per-entry object
churn; ``FieldElement`` is the public scalar type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .errors import CompositeModulus, DivisionByZero, FieldMismatch, InfiniteField, MalformedSpec

Raw = Union[int, Fraction]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """GF(p) when ``modulus`` is a prime, the rationals when it is ``None``."""

    modulus: int | None = None

    def __post_init__(self):
        if self.modulus is not None and not is_prime(self.modulus):
            raise CompositeModulus(self.modulus)

    @classmethod
    def gf(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.modulus is not None

    @property
    def order(self) -> int:
        if self.modulus is None:
            raise InfiniteField("the rationals have no finite order")
        return self.modulus

    @property
    def descriptor(self) -> str:
        return "rationals" if self.modulus is None else f"gf:{self.modulus}"

    def __str__(self) -> str:
        return "QQ" if self.modulus is None else f"GF({self.modulus})"

    def __repr__(self) -> str:
        return f"Field({self.descriptor!r})"

    # raw-value helpers
    def norm(self, x) -> Raw:
        """Canonical raw representative of an int/Fraction value."""
        if self.modulus is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return x.numerator % self.modulus
            den = x.denominator % self.modulus
            if den == 0:
                raise DivisionByZero(f"{x} has a denominator divisible by {self.modulus}")
            return x.numerator * pow(den, -1, self.modulus) % self.modulus
        return x % self.modulus

    def inv_raw(self, x: Raw) -> Raw:
        if x == 0:
            raise DivisionByZero("inverse of zero")
        if self.modulus is None:
            return 1 / Fraction(x)
        return pow(x, -1, self.modulus)

    def raw_str(self, x: Raw) -> str:
        if self.modulus is None:
            return f"{x.numerator}/{x.denominator}"
        return str(x)

    # element construction
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value!r} is not in {self}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, bool) or not isinstance(value, (int, Fraction)):
            raise TypeError(f"cannot coerce {value!r} into {self}")
        return FieldElement(self, self.norm(value))

    def coerce_raw(self, value) -> Raw:
        return self(value).value

    def parse(self, text: str) -> "FieldElement":
        """Parse ``"3"``, ``"-2"`` or ``"num/den"``."""
        s = text.strip()
        try:
            value = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise MalformedSpec(f"bad field-element literal {text!r}") from exc
        if "." in s or "e" in s.lower():
            raise MalformedSpec(f"bad field-element literal {text!r}")
        return FieldElement(self, self.norm(value))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, self.norm(0))

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, self.norm(1))


def field_make(spec: str) -> Field:
    """Build a field from ``"gf:<p>"`` or ``"rationals"``."""
    if not isinstance(spec, str):
        raise MalformedSpec(f"field descriptor must be a string, got {spec!r}")
    s = spec.strip().lower()
    if s in ("rationals", "q", "qq"):
        return Field.rationals()
    if s.startswith("gf:"):
        tail = s[3:]
        if not tail.isdigit():
            raise MalformedSpec(f"bad modulus in field descriptor {spec!r}")
        p = int(tail)
        if p < 2:
            raise MalformedSpec(f"modulus must be at least 2, got {p}")
        return Field.gf(p)
    raise MalformedSpec(f"unknown field descriptor {spec!r}")


class FieldElement:
    """An exact scalar of a :class:`Field`.

    Plain ``int`` and ``Fraction`` operands are coerced into the element's
    field; elements of two different fields never mix.
    """

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: Raw):
        self.field = field
        self.value = value

    def _other(self, other) -> Raw:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine elements of {self.field} and {other.field}")
            return other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.field.norm(other)
        return NotImplemented

    def _wrap(self, raw) -> "FieldElement":
        return FieldElement(self.field, self.field.norm(raw))

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.value * self.field.inv_raw(o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self._wrap(o * self.field.inv_raw(self.value))

    def __neg__(self):
        return self._wrap(-self.value)

    def __pos__(self):
        return self

    def inv(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv_raw(self.value))

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        if self.field.modulus is not None:
            return FieldElement(self.field, pow(self.value, k, self.field.modulus))
        return FieldElement(self.field, self.value**k)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.value == self.field.norm(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        if self.field.modulus is None and self.value.denominator != 1:
            raise TypeError(f"{self} is not an integer")
        return int(self.value)

    def sort_key(self):
        return self.value

    def __str__(self):
        if self.field.modulus is None and self.value.denominator == 1:
            return str(self.value.numerator)
        return str(self.value)

    def to_json(self) -> str:
        return self.field.raw_str(self.value)

    def __repr__(self):
        return f"FieldElement({self.field}, {self})"


def canonicalize(x: FieldElement) -> FieldElement:
    return FieldElement(x.field, x.field.norm(x.value))


_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def arith(op: str, a: FieldElement, b: FieldElement | None = None) -> FieldElement:
    """Apply a named field operation (``add sub mul div neg inv``)."""
    if op == "neg":
        return -a
    if op == "inv":
        return a.inv()
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    if b is None:
        raise TypeError(f"{op} needs two operands")
    if not isinstance(b, FieldElement) or b.field != a.field:
        raise FieldMismatch(f"operands of {op} must share a field")
    return _OPS[op](a, b)


def enumerate_elements(f: Field) -> list[FieldElement]:
    """All elements ``0, 1, ..., p-1`` of a prime field."""
    if f.modulus is None:
        raise InfiniteField("cannot enumerate the rationals")
    return [FieldElement(f, v) for v in range(f.modulus)]
