"""Exact arithmetic in Q(sqrt 3), enough for charts of equilateral tilings."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
import math


@total_ordering
class Q3:
    """The number p + q*sqrt(3) with rational p, q."""

    __slots__ = ("p", "q")

    def __init__(self, p=0, q=0):
        self.p = Fraction(p)
        self.q = Fraction(q)

    def __add__(self, o):
        o = _lift(o)
        return Q3(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __neg__(self):
        return Q3(-self.p, -self.q)

    def __sub__(self, o):
        return self + (-_lift(o))

    def __rsub__(self, o):
        return _lift(o) - self

    def __mul__(self, o):
        o = _lift(o)
        return Q3(self.p * o.p + 3 * self.q * o.q, self.p * o.q + self.q * o.p)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _lift(o)
        n = o.p * o.p - 3 * o.q * o.q
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt3)")
        return self * Q3(o.p / n, -o.q / n)

    def sign(self) -> int:
        # sign of p + q*sqrt3 decided exactly by comparing squares
        sp = (self.p > 0) - (self.p < 0)
        sq = (self.q > 0) - (self.q < 0)
        if sp == sq or sq == 0:
            return sp
        if sp == 0:
            return sq
        lhs, rhs = self.p * self.p, 3 * self.q * self.q
        if lhs == rhs:
            return 0
        return sp if lhs > rhs else sq

    def __eq__(self, o):
        try:
            o = _lift(o)
        except TypeError:
            return NotImplemented
        return self.p == o.p and self.q == o.q

    def __lt__(self, o):
        return (self - _lift(o)).sign() < 0

    def __hash__(self):
        return hash((self.p, self.q))

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(3)

    def __repr__(self):
        return f"Q3({self.p}, {self.q})"

    def isqrt_floor_of_square(self) -> int:
        """floor(sqrt(self)) for a nonnegative value, exactly."""
        if self.sign() < 0:
            raise ValueError("negative")
        k = int(math.isqrt(max(0, int(float(self)))))
        while (Q3(k + 1) * (k + 1)) <= self:
            k += 1
        while Q3(k * k) > self:
            k -= 1
        return k


def _lift(x) -> Q3:
    if isinstance(x, Q3):
        return x
    if isinstance(x, (int, Fraction)):
        return Q3(x, 0)
    raise TypeError(f"cannot lift {type(x).__name__} to Q3")


SQRT3 = Q3(0, 1)
