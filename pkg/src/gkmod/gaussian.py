"""Exact complex scalars a + b*i with rational a, b."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union

ScalarLike = Union["GaussianRational", int, Fraction, str]


class GaussianRational:
    """An element of Q(i), stored as a pair of Fractions in lowest terms."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value: ScalarLike) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value, 0)
        if isinstance(value, str):
            return parse_scalar(value)
        if isinstance(value, Rational):
            return cls(Fraction(value.numerator, value.denominator), 0)
        raise TypeError(f"cannot interpret {value!r} as a Gaussian rational")

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{_imag_str(abs(self.im))})"

    def to_json(self):
        """``{"re": "a/b", "im": "c/d"}`` with exact rational strings."""
        return {"re": str(self.re), "im": str(self.im)}


def _imag_str(x: Fraction) -> str:
    if x == 1:
        return "i"
    if x == -1:
        return "-i"
    return f"{x}*i"


ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I = GaussianRational(0, 1)


def parse_rational(text) -> Fraction:
    """Parse ``"3"``, ``"-7/4"`` or an int into a Fraction; floats are rejected."""
    if isinstance(text, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"rational must be given as an int or a 'num/den' string, got {text!r}")
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"inexact rational literal {text!r}")
    return Fraction(s)


def parse_scalar(value) -> GaussianRational:
    """Parse a JSON scalar: int, ``"p/q"``, ``{"re":..., "im":...}`` or a string like ``"1/2-3*i"``."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, dict):
        extra = set(value) - {"re", "im"}
        if extra:
            raise ValueError(f"unexpected keys {sorted(extra)} in Gaussian rational")
        return GaussianRational(parse_rational(value.get("re", 0)), parse_rational(value.get("im", 0)))
    if isinstance(value, str) and "i" in value:
        from .polynomial import parse_polynomial

        p = parse_polynomial(value, 0)
        if p.is_zero():
            return ZERO
        if set(p.terms) != {()}:
            raise ValueError(f"not a scalar: {value!r}")
        return p.terms[()]
    return GaussianRational(parse_rational(value), 0)
