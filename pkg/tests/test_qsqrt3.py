from fractions import Fraction
import math

from hypothesis import given, strategies as st

from wallspace.qsqrt3 import Q3, SQRT3

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_sqrt3_squares_to_three():
    assert SQRT3 * SQRT3 == Q3(3)


@given(small, small)
def test_sign_matches_float(p, q):
    x = Q3(p, q)
    val = float(p) + float(q) * math.sqrt(3)
    if abs(val) > 1e-9:
        assert x.sign() == (1 if val > 0 else -1)
    else:
        assert x.sign() == 0 or abs(val) < 1e-9


@given(small, small, small, small)
def test_ring_ops_match_float(a, b, c, d):
    x, y = Q3(a, b), Q3(c, d)
    s3 = math.sqrt(3)
    assert math.isclose(float(x * y), float(x) * float(y), abs_tol=1e-6)
    assert math.isclose(float(x - y), float(x) - float(y), abs_tol=1e-9)
    if y.sign():
        assert (x / y) * y == x


@given(st.integers(0, 30), st.integers(0, 30))
def test_floor_of_distance(i, j):
    # squared length of i*e1 + j*e2 in the triangular lattice
    sq = Q3(i * i + i * j + j * j)
    assert sq.isqrt_floor_of_square() == math.isqrt(i * i + i * j + j * j)
    half = Q3(Fraction(3, 4))  # (sqrt3/2)^2
    assert half.isqrt_floor_of_square() == 0
