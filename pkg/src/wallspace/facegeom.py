"""Planar geometry inside a single face polygon.

Wall chords cut a face into regions. Regions are found as the bounded faces
of the planar arrangement of the polygon sides and the chords, traversed
with the usual next-edge-clockwise rule. Floating point is enough here: all
coordinates are O(1) and distinct features are far apart compared to the
snapping tolerance.
"""
from __future__ import annotations

from functools import lru_cache
import math
from typing import Dict, List, Sequence, Tuple

from .complex_core import Anchor, Shape

SNAP = 1e-9
NUDGE = 1e-6

Point = Tuple[float, float]


def polygon(shape: Shape) -> List[Point]:
    return shape.vertices_float()[:-1]


def perimeter_point(shape: Shape, pos) -> Point:
    """Point at perimeter parameter pos = side + fraction (sides unit-parametrised)."""
    pts = polygon(shape)
    n = len(pts)
    s = int(math.floor(pos)) % n
    f = float(pos) - math.floor(pos)
    (x0, y0), (x1, y1) = pts[s], pts[(s + 1) % n]
    return (x0 + f * (x1 - x0), y0 + f * (y1 - y0))


def anchor_pos(a: Anchor):
    from fractions import Fraction
    if a.vertex is not None:
        return Fraction(a.vertex)
    return a.side + a.frac


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _seg_intersection(p, q, r, s):
    """Intersection point of segments pq and rs if they meet in a single point."""
    d = (q[0] - p[0]) * (s[1] - r[1]) - (q[1] - p[1]) * (s[0] - r[0])
    if abs(d) < 1e-14:
        return None
    t = ((r[0] - p[0]) * (s[1] - r[1]) - (r[1] - p[1]) * (s[0] - r[0])) / d
    u = ((r[0] - p[0]) * (q[1] - p[1]) - (r[1] - p[1]) * (q[0] - p[0])) / d
    if -SNAP <= t <= 1 + SNAP and -SNAP <= u <= 1 + SNAP:
        return (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
    return None


def _key(p):
    return (round(p[0] / SNAP / 10), round(p[1] / SNAP / 10))


def point_in_polygon(pts: Sequence[Point], pt: Point) -> bool:
    x, y = pt
    inside = False
    n = len(pts)
    for i in range(n):
        (ax, ay), (bx, by) = pts[i], pts[(i + 1) % n]
        if (ay > y) != (by > y):
            xi = ax + (y - ay) * (bx - ax) / (by - ay)
            if xi > x:
                inside = not inside
    return inside


def area(pts: Sequence[Point]) -> float:
    return 0.5 * sum(pts[i][0] * pts[(i + 1) % len(pts)][1] - pts[(i + 1) % len(pts)][0] * pts[i][1]
                     for i in range(len(pts)))


class Arrangement:
    """Regions of a polygon cut by chords given as pairs of points."""

    def __init__(self, poly: Sequence[Point], chords: Sequence[Tuple[Point, Point]]):
        self.poly = list(poly)
        segs = [(self.poly[i], self.poly[(i + 1) % len(self.poly)]) for i in range(len(self.poly))]
        segs += list(chords)
        # split every segment at all intersection points
        cuts = [[p, q] for p, q in segs]
        for i in range(len(segs)):
            for j in range(i + 1, len(segs)):
                x = _seg_intersection(*segs[i], *segs[j])
                if x is not None:
                    cuts[i].append(x)
                    cuts[j].append(x)
        nodes: Dict[tuple, Point] = {}
        adj: Dict[tuple, set] = {}
        for (p, q), pts in zip(segs, cuts):
            dx, dy = q[0] - p[0], q[1] - p[1]
            L2 = dx * dx + dy * dy
            pts = sorted(pts, key=lambda r: ((r[0] - p[0]) * dx + (r[1] - p[1]) * dy) / L2)
            keys = []
            for r in pts:
                k = _key(r)
                nodes.setdefault(k, r)
                if not keys or keys[-1] != k:
                    keys.append(k)
            for a, b in zip(keys, keys[1:]):
                adj.setdefault(a, set()).add(b)
                adj.setdefault(b, set()).add(a)
        self.nodes = nodes
        # angular order of neighbours
        order = {}
        for a, nb in adj.items():
            pa = nodes[a]
            order[a] = sorted(nb, key=lambda b: math.atan2(nodes[b][1] - pa[1], nodes[b][0] - pa[0]))
        used = set()
        regions = []
        for a in order:
            for b in order[a]:
                if (a, b) in used:
                    continue
                cyc = []
                u, v = a, b
                while (u, v) not in used:
                    used.add((u, v))
                    cyc.append(u)
                    # next edge: at v, turn to the neighbour just clockwise of u
                    nb = order[v]
                    i = nb.index(u)
                    w = nb[(i - 1) % len(nb)]
                    u, v = v, w
                poly_pts = [nodes[k] for k in cyc]
                if area(poly_pts) > 1e-12:
                    regions.append(poly_pts)
        # deterministic order: by lowest-leftmost vertex
        regions.sort(key=lambda r: min((round(y, 9), round(x, 9)) for x, y in r))
        self.regions = regions

    def locate(self, pt: Point) -> int:
        for i, r in enumerate(self.regions):
            if point_in_polygon(r, pt):
                return i
        raise ValueError(f"point {pt} not inside any region")

    def sample_points(self) -> List[Point]:
        """One interior point per region."""
        out = []
        for r in self.regions:
            out.append(interior_point(r))
        return out


def interior_point(poly: Sequence[Point]) -> Point:
    # nudge inward from the midpoint of the longest edge (regions are CCW)
    n = len(poly)
    best = max(range(n), key=lambda i: math.dist(poly[i], poly[(i + 1) % n]))
    a, b = poly[best], poly[(best + 1) % n]
    mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
    dx, dy = b[0] - a[0], b[1] - a[1]
    L = math.hypot(dx, dy)
    for h in (1e-3, 1e-4, 1e-5):
        p = (mx - dy / L * h, my + dx / L * h)
        if point_in_polygon(poly, p):
            return p
    raise ValueError("could not find an interior point")


def sector_point(shape: Shape, k: int, angle_from_next: float) -> Point:
    """Point just inside corner k at the given angle measured from side k toward side k-1."""
    pts = polygon(shape)
    n = len(pts)
    o = pts[k]
    nxt = pts[(k + 1) % n]
    base = math.atan2(nxt[1] - o[1], nxt[0] - o[0])
    th = base + angle_from_next
    return (o[0] + NUDGE * math.cos(th), o[1] + NUDGE * math.sin(th))


def direction_angle(shape: Shape, k: int, target: Point) -> float:
    """Angle at corner k from side k (toward k+1) counter-clockwise to the ray toward target."""
    pts = polygon(shape)
    n = len(pts)
    o = pts[k]
    nxt = pts[(k + 1) % n]
    a0 = math.atan2(nxt[1] - o[1], nxt[0] - o[0])
    a1 = math.atan2(target[1] - o[1], target[0] - o[0])
    d = (a1 - a0) % (2 * math.pi)
    return d


def edge_point_inside(shape: Shape, side: int, frac: float) -> Point:
    """Point just inside the polygon next to perimeter position side+frac."""
    pts = polygon(shape)
    n = len(pts)
    a, b = pts[side], pts[(side + 1) % n]
    x, y = a[0] + frac * (b[0] - a[0]), a[1] + frac * (b[1] - a[1])
    dx, dy = b[0] - a[0], b[1] - a[1]
    L = math.hypot(dx, dy)
    # polygons are counter-clockwise, so the interior is to the left
    return (x - dy / L * NUDGE, y + dx / L * NUDGE)


def segments_cross(p, q, r, s) -> bool:
    """Proper crossing of two segments (interiors meet in one point)."""
    d1, d2 = _cross(p, q, r), _cross(p, q, s)
    d3, d4 = _cross(r, s, p), _cross(r, s, q)
    return (d1 * d2 < -1e-12) and (d3 * d4 < -1e-12)
