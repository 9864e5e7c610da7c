"""Exact angles stored as rational multiples of pi."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
import math


@total_ordering
class Angle:
    """An angle (p/q)*pi kept in lowest terms.

    Corner angles must satisfy 0 < value < 2*pi, but sums of corners along a
    link cycle may exceed that, so the range check lives in ``corner``.
    """

    __slots__ = ("coef",)

    def __init__(self, numerator, denominator=1):
        self.coef = Fraction(numerator, denominator)

    @classmethod
    def corner(cls, numerator, denominator=1) -> "Angle":
        a = cls(numerator, denominator)
        if not (0 < a.coef < 2):
            raise ValueError(f"corner angle {a} outside (0, 2pi)")
        return a

    @property
    def numerator(self) -> int:
        return self.coef.numerator

    @property
    def denominator(self) -> int:
        return self.coef.denominator

    def radians(self) -> float:
        return float(self.coef) * math.pi

    def __add__(self, other):
        return Angle(self.coef + _coef(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Angle(self.coef - _coef(other))

    def __mul__(self, k):
        return Angle(self.coef * Fraction(k))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (Angle, int, Fraction)):
            return self.coef == _coef(other)
        return NotImplemented

    def __lt__(self, other):
        return self.coef < _coef(other)

    def __hash__(self):
        return hash(("Angle", self.coef))

    def __repr__(self):
        return f"Angle({self.coef.numerator}, {self.coef.denominator})"

    def __str__(self):
        p, q = self.coef.numerator, self.coef.denominator
        head = "pi" if p == 1 else f"{p}pi"
        return head if q == 1 else f"{head}/{q}"

    def to_json(self):
        return [self.coef.numerator, self.coef.denominator]


def _coef(x) -> Fraction:
    if isinstance(x, Angle):
        return x.coef
    return Fraction(x)


PI = Angle(1)
TWO_PI = Angle(2)
ZERO = Angle(0)
