from fractions import Fraction
import math

from hypothesis import given, strategies as st
import pytest

from wallspace.angles import Angle, PI, TWO_PI, ZERO

fracs = st.fractions(min_value=-4, max_value=4, max_denominator=60)


def test_corner_range():
    assert Angle.corner(1, 3) == Fraction(1, 3)
    for bad in ((0, 1), (2, 1), (-1, 3), (7, 3)):
        with pytest.raises(ValueError):
            Angle.corner(*bad)


def test_str_and_json():
    assert str(Angle(2, 3)) == "2pi/3"
    assert str(PI) == "pi" and str(TWO_PI) == "2pi"
    assert Angle(4, 6).to_json() == [2, 3]


def test_exact_sum_of_triangle_corners():
    assert Angle(1, 3) * 3 == PI
    assert sum([Angle(1, 3)] * 6, ZERO) == TWO_PI


@given(fracs, fracs)
def test_arithmetic_matches_fractions(x, y):
    a, b = Angle(x), Angle(y)
    assert (a + b).coef == x + y
    assert (a - b).coef == x - y
    assert (a < b) == (x < y)
    assert math.isclose((a + b).radians(), float(x + y) * math.pi, abs_tol=1e-12)


@given(fracs)
def test_hash_consistent_with_eq(x):
    assert hash(Angle(x)) == hash(Angle(x.numerator, x.denominator))
