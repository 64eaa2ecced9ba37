"""Exact scalars: rationals and Gaussian rationals.

All arithmetic in the engine runs over Q or Q(i).  A Scalar always carries
both coordinates as reduced Fractions; the field choice ("q" vs "qi") only
controls which values are admissible as inputs and whether square roots of
negative rationals exist.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

Rat = Union[int, Fraction]


class Scalar:
    """Element of Q(i), stored as re + im*i with reduced Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: Rat = 0, im: Rat = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def of(value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return Scalar(value)
        if isinstance(value, str):
            return parse_rational(value)
        raise TypeError(f"cannot make a Scalar from {value!r}")

    @staticmethod
    def i() -> "Scalar":
        return Scalar(0, 1)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_one(self) -> bool:
        return self.re == 1 and self.im == 0

    def is_rational(self) -> bool:
        return self.im == 0

    def is_integer(self) -> bool:
        return self.im == 0 and self.re.denominator == 1

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "Scalar":
        other = Scalar.of(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "Scalar":
        other = Scalar.of(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "Scalar":
        return Scalar.of(other) - self

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __mul__(self, other) -> "Scalar":
        other = Scalar.of(other)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Scalar":
        other = Scalar.of(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Scalar")
        return Scalar(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other) -> "Scalar":
        return Scalar.of(other) / self

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return (ONE / self) ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    # -- comparison / hashing -----------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        return (self.re, self.im)

    # -- display ------------------------------------------------------

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        istr = "i" if mag == 1 else f"{mag}i"
        return f"{self.re}{sign}{istr}"


ZERO = Scalar(0)
ONE = Scalar(1)


def parse_rational(text: str) -> Scalar:
    """Parse 'p', 'p/q' or the literal 'i' into a Scalar."""
    text = text.strip()
    if text == "i":
        return Scalar.i()
    if text == "-i":
        return -Scalar.i()
    return Scalar(Fraction(text))


class Field:
    """The configured base field: Q ("q") or Q(i) ("qi")."""

    def __init__(self, name: str = "q"):
        if name not in ("q", "qi"):
            raise ValueError(f"unknown field {name!r}")
        self.name = name

    @property
    def has_i(self) -> bool:
        return self.name == "qi"

    def contains(self, s: Scalar) -> bool:
        return self.has_i or s.im == 0

    def sqrt(self, s: Scalar) -> Scalar | None:
        """Exact square root of s in this field, or None."""
        if s.is_zero():
            return ZERO
        if s.im == 0:
            r = _sqrt_fraction(abs(s.re))
            if r is None:
                return None
            if s.re > 0:
                return Scalar(r)
            return Scalar(0, r) if self.has_i else None
        if not self.has_i:
            return None
        # (u+vi)^2 = a+bi:  u^2 = (a + |s|)/2, v = b/(2u)
        norm = _sqrt_fraction(s.re * s.re + s.im * s.im)
        if norm is None:
            return None
        u = _sqrt_fraction((s.re + norm) / 2)
        if u is None or u == 0:
            return None
        return Scalar(u, s.im / (2 * u))

    def __repr__(self):
        return f"Field({self.name!r})"

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name


QQ = Field("q")
QQI = Field("qi")


def _sqrt_fraction(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    pn = isqrt(x.numerator)
    pd = isqrt(x.denominator)
    if pn * pn != x.numerator or pd * pd != x.denominator:
        return None
    return Fraction(pn, pd)
