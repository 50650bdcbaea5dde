"""Exact Gaussian-rational scalars.

Every algebraic identity in the workbench is checked as an exact equality,
so the ground field is Q(i) rather than floats.  A scalar is a pair of
`fractions.Fraction` values (real and imaginary part).
"""
from __future__ import annotations

from fractions import Fraction
import re

_RAT = r"-?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"^\s*(?P<re>{_RAT})?\s*(?:(?P<sign>[+-])\s*(?P<im>{_RAT})?\s*i)?\s*$"
)


class Scalar:
    """A Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if isinstance(re, Fraction) else Fraction(re))
        object.__setattr__(self, "im", im if isinstance(im, Fraction) else Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __sub__(self, other):
        other = _coerce(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if not other.im and not self.im:
            return Scalar(self.re * other.re)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def inverse(self) -> Scalar:
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar(self.re / n, -self.im / n)

    def conjugate(self) -> Scalar:
        return Scalar(self.re, -self.im)

    def norm_sq(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- predicates / conversions -----------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def is_real(self) -> bool:
        return not self.im

    def __complex__(self):
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self):
        return f"Scalar({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)
HALF = Scalar(Fraction(1, 2))


def _coerce(value) -> Scalar:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Fraction)):
        return Scalar(value)
    raise TypeError(f"cannot coerce {type(value)!r} to Scalar")


def rat(p, q=1) -> Fraction:
    return Fraction(p, q)


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def parse_scalar(text: str) -> Scalar:
    """Parse "p/q", "p/q+r/s i", "-i", "3-2i" style strings."""
    m = _SCALAR_RE.match(text)
    if not m or (m.group("re") is None and m.group("sign") is None):
        raise ValueError(f"not a scalar: {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") is not None else Fraction(0)
    im_part = Fraction(0)
    if m.group("sign") is not None:
        mag = Fraction(m.group("im")) if m.group("im") is not None else Fraction(1)
        im_part = mag if m.group("sign") == "+" else -mag
    return Scalar(re_part, im_part)


def format_fraction(x: Fraction) -> str:
    return str(x)


def format_scalar(z: Scalar) -> str:
    if not z.im:
        return str(z.re)
    sign = "+" if z.im >= 0 else "-"
    return f"{z.re}{sign}{abs(z.im)}i"
