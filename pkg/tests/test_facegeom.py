import math

from hypothesis import assume, given, settings, strategies as st
import pytest

from wallspace.facegeom import (Arrangement, area, perimeter_point, point_in_polygon, polygon,
                                segments_cross)

SQ = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def test_shapes_close_up(vspec):
    for s in vspec.shapes.values():
        assert s.closure_residual() < 1e-12
    tri = polygon(vspec.shapes["triangle"])
    assert abs(area(tri) - math.sqrt(3) / 4) < 1e-12


def test_bowtie_area(vspec):
    bow = polygon(vspec.shapes["bowtie"])
    # 1 x sqrt3/2 rectangle minus two notches of base sqrt3/2 and depth 1/4
    h = math.sqrt(3) / 2
    assert abs(area(bow) - (h - 2 * (h * 0.25 / 2))) < 1e-12
    rh = polygon(vspec.shapes["rhombus"])
    assert abs(area(rh) - 0.25 * math.sin(math.pi / 3)) < 1e-12


def test_perimeter_point_midpoints(vspec):
    shape = vspec.shapes["triangle"]
    tri = polygon(shape)
    mid = perimeter_point(shape, 0.5)
    assert math.dist(mid, ((tri[0][0] + tri[1][0]) / 2, (tri[0][1] + tri[1][1]) / 2)) < 1e-12


def test_cross_in_square():
    arr = Arrangement(SQ, [((0, 0), (1, 1)), ((1, 0), (0, 1))])
    assert len(arr.regions) == 4
    assert abs(sum(area(r) for r in arr.regions) - 1) < 1e-12
    assert arr.locate((0.5, 0.1)) != arr.locate((0.5, 0.9))


def test_touching_chords_do_not_cross():
    assert not segments_cross((0, 0), (1, 1), (1, 1), (2, 0))
    assert segments_cross((0, 0), (1, 1), (0, 1), (1, 0))


def _boundary_point(t):
    # unit square perimeter parametrised by t in [0, 4)
    s, f = int(t), t - int(t)
    return [(f, 0.0), (1.0, f), (1.0 - f, 1.0), (0.0, 1.0 - f)][s]


pos = st.floats(0.05, 3.95).filter(lambda t: 0.05 < t % 1 < 0.95)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(pos, pos), min_size=1, max_size=4))
def test_region_count_formula(chords):
    # regions of a convex polygon = 1 + chords + interior crossings (general position)
    segs = [(_boundary_point(a), _boundary_point(b)) for a, b in chords]
    for p, q in segs:
        assume(math.dist(p, q) > 1e-3 and abs(p[0] - q[0]) + abs(p[1] - q[1]) > 1e-3)
        assume(not (p[0] == q[0] in (0.0, 1.0) or p[1] == q[1] in (0.0, 1.0)))
    ends = [x for s in segs for x in s]
    assume(all(math.dist(a, b) > 1e-3 for i, a in enumerate(ends) for b in ends[i + 1:]))
    crossings = sum(segments_cross(*segs[i], *segs[j]) for i in range(len(segs)) for j in range(i + 1, len(segs)))
    arr = Arrangement(SQ, segs)
    assert len(arr.regions) == 1 + len(segs) + crossings
    assert abs(sum(area(r) for r in arr.regions) - 1) < 1e-9
    for pt in arr.sample_points():
        assert point_in_polygon(SQ, pt)
