"""Walls in a ball: extraction, separation, crossing numbers, flat planes.

Footprint chords of one wall type are lifted to every ball face and glued
at shared points; each connected component is a wall. Separation is
computed on the core of the ball, the closed faces all of whose edges carry
their full ring of faces. Inside the core the complement of a wall is cut
into pieces (face regions, open edge pieces, vertices) glued along shared
boundaries; at a vertex lying on the wall the pieces around it are glued
only within the components of the link minus the wall trace.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .complex_core import ComplexSpec, WALL_TYPES
from .cover import Ball, FlatPatch, link_at
from .facegeom import (Arrangement, anchor_pos, direction_angle, edge_point_inside,
                       perimeter_point, polygon, sector_point, segments_cross)
from .linkgraph import halving_components, link_distance
from .qsqrt3 import Q3

# a wall point is ("v", vertex) or ("e", edge, position from tail)
WPoint = tuple


class WallError(ValueError):
    pass


# ---------------------------------------------------------- footprint data

@dataclass(frozen=True)
class _FaceFootprint:
    chords: Tuple[Tuple, ...]       # (anchor_p, anchor_q) not lying along a side
    side_edges: Tuple[int, ...]     # sides that are wall edges
    fat: bool


class FootprintTable:
    """Per (wall type, quotient face) chords, wall sides and fat flags."""

    def __init__(self, spec: ComplexSpec):
        self.spec = spec
        self.table: Dict[Tuple[str, int], _FaceFootprint] = {}
        for wt, wf in spec.footprints.items():
            per = {}
            for e in wf.entries:
                chords, sides, fat = per.get(e.face, ([], set(), False))
                n = spec.faces[e.face].shape.n
                for p, q in e.segments:
                    s = _along_side(p, q, n)
                    if s is None:
                        chords.append((p, q))
                    elif s == "partial":
                        raise WallError("footprint segments along a side must cover the whole side")
                    else:
                        sides.add(s)
                per[e.face] = (chords, sides, fat or e.cell)
            for fi, (chords, sides, fat) in per.items():
                if fat:
                    sides |= set(range(spec.faces[fi].shape.n))
                shape = spec.faces[fi].shape
                pts = [(perimeter_point(shape, anchor_pos(p)), perimeter_point(shape, anchor_pos(q)))
                       for p, q in chords]
                for i in range(len(pts)):
                    for j in range(i + 1, len(pts)):
                        if segments_cross(*pts[i], *pts[j]):
                            raise WallError(f"chords of type {wt} cross inside face {fi}")
                self.table[(wt, fi)] = _FaceFootprint(tuple(chords), tuple(sorted(sides)), fat)

    def get(self, wt, fi) -> Optional[_FaceFootprint]:
        return self.table.get((wt, fi))

    def types(self):
        return [t for t in WALL_TYPES if t in self.spec.footprints]


def _along_side(p, q, n):
    pv = anchor_pos(p)
    qv = anchor_pos(q)
    a, b = sorted((pv, qv))
    # both on one side (including its endpoints)?
    for s in range(n):
        lo, hi = Fraction(s), Fraction(s + 1)
        on = lambda x: lo <= x <= hi or (s == n - 1 and x == 0)
        xa = hi if (s == n - 1 and a == 0) else a
        if on(a) and on(b):
            pts = sorted({xa, b}) if s == n - 1 else [a, b]
            if (pts[0], pts[-1]) == (lo, hi):
                return s
            if p.vertex is not None and q.vertex is not None and abs(p.vertex - q.vertex) not in (1, n - 1):
                continue
            return "partial"
    return None


# ------------------------------------------------------------------- walls

@dataclass
class Wall:
    id: int
    wall_type: str
    points: FrozenSet[WPoint]
    chords: Tuple[Tuple[int, int], ...]      # (ball face, chord index)
    wall_edges: FrozenSet[int]
    fat_faces: FrozenSet[int]
    interiorly_complete: bool = False
    core_chords: int = 0

    @property
    def vertices(self) -> Set[int]:
        return {p[1] for p in self.points if p[0] == "v"}

    @property
    def carrier_faces(self) -> Set[int]:
        return {f for f, _ in self.chords} | set(self.fat_faces)

    @property
    def carrier_edges(self) -> Set[int]:
        return {p[1] for p in self.points if p[0] == "e"} | set(self.wall_edges)

    def carrier(self) -> Set[tuple]:
        out = {("face", f) for f in self.carrier_faces}
        out |= {("edge", e) for e in self.carrier_edges}
        out |= {("vertex", v) for v in self.vertices}
        return out

    def summary(self) -> dict:
        return {"id": self.id, "wall_type": self.wall_type, "points": len(self.points),
                "segments": len(self.chords), "edges": len(self.wall_edges),
                "rhombi": len(self.fat_faces), "interiorly_complete": self.interiorly_complete}


def ball_point(ball: Ball, f: int, anchor) -> WPoint:
    face = ball.spec.faces[ball.face_q[f]]
    if anchor.vertex is not None:
        return ("v", ball.face_verts[f][anchor.vertex])
    e = ball.face_edges[f][anchor.side]
    s = face.boundary[anchor.side][1]
    t = anchor.frac if s > 0 else 1 - anchor.frac
    return ("e", e, t)


def core_faces(ball: Ball) -> Set[int]:
    """Faces all of whose edges carry their full ring of faces."""
    return {f for f in range(ball.n_faces) if all(ball.edge_interior(e) for e in ball.face_edges[f])}


def core_faces_at(ball: Ball, radius: int) -> Set[int]:
    """The core of the radius-``radius`` ball, found inside a possibly larger ball."""
    d = ball.vert_dist
    return {f for f in range(ball.n_faces)
            if all(min(d[v] for v in ball.edge_ends[e]) <= radius - 1 for e in ball.face_edges[f])}


def wall_system(spec: ComplexSpec, radius: int, buffer: int = 1, base=0, cap=None) -> "WallSystem":
    """Walls checked on the radius-``radius`` core, with ``buffer`` extra rings developed."""
    from .cover import build_ball, DEFAULT_CAP
    ball = build_ball(spec, radius + buffer, base, cap or DEFAULT_CAP)
    return WallSystem(ball, spec, region_radius=radius)


class WallSystem:
    """All walls of a ball together with cached geometry and side data."""

    def __init__(self, ball: Ball, spec: Optional[ComplexSpec] = None,
                 region_radius: Optional[int] = None):
        self.ball = ball
        self.spec = spec or ball.spec
        self.fp = FootprintTable(self.spec)
        self.core = core_faces(ball)
        self.core_edges = {e for f in self.core for e in ball.face_edges[f]}
        self.core_vertices = {v for f in self.core for v in ball.face_verts[f]}
        # the region is where checks are made; the rest of the core is a buffer
        # through which the two sides of a wall may reconnect
        self.region_radius = ball.radius if region_radius is None else region_radius
        self.region = core_faces_at(ball, self.region_radius) & self.core
        self.region_edges = {e for f in self.region for e in ball.face_edges[f]}
        self.region_vertices = {v for f in self.region for v in ball.face_verts[f]}
        self._arr = {}
        self.walls = self._extract()
        self._sides = {}

    # -------------------------------------------------------- extraction
    def _extract(self) -> List[Wall]:
        ball = self.ball
        out: List[Wall] = []
        for wt in self.fp.types():
            parent: Dict[WPoint, WPoint] = {}

            def find(x):
                parent.setdefault(x, x)
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            def union(a, b):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

            chords, wedges, fats = [], set(), set()
            for f in range(ball.n_faces):
                ff = self.fp.get(wt, ball.face_q[f])
                if ff is None:
                    continue
                for ci, (p, q) in enumerate(ff.chords):
                    a, b = ball_point(ball, f, p), ball_point(ball, f, q)
                    union(a, b)
                    chords.append((f, ci, a))
                for s in ff.side_edges:
                    e = ball.face_edges[f][s]
                    wedges.add(e)
                    t, h = ball.edge_ends[e]
                    union(("v", t), ("v", h))
                if ff.fat:
                    fats.add(f)
            # points lying inside wall edges join that edge's component
            for p in list(parent):
                if p[0] == "e" and p[1] in wedges:
                    union(p, ("v", ball.edge_ends[p[1]][0]))
            for e in wedges:
                for v in ball.edge_ends[e]:
                    find(("v", v))
            comps: Dict[WPoint, dict] = {}
            for p in parent:
                r = find(p)
                comps.setdefault(r, {"points": set(), "chords": [], "edges": set(), "fat": set()})["points"].add(p)
            for f, ci, a in chords:
                comps[find(a)]["chords"].append((f, ci))
            for e in wedges:
                comps[find(("v", ball.edge_ends[e][0]))]["edges"].add(e)
            for f in fats:
                comps[find(("v", ball.face_verts[f][0]))]["fat"].add(f)
            keyed = sorted(comps.values(), key=lambda c: min(_pkey(p) for p in c["points"]))
            for c in keyed:
                w = Wall(len(out), wt, frozenset(c["points"]), tuple(sorted(c["chords"])),
                         frozenset(c["edges"]), frozenset(c["fat"]))
                self._mark_complete(w)
                out.append(w)
        return out

    def _mark_complete(self, w: Wall):
        # interiorly complete: the wall passes through an open face of the region
        n = sum(1 for f, _ in w.chords if f in self.region) + len(w.fat_faces & self.region)
        w.core_chords = n
        w.interiorly_complete = n > 0

    # -------------------------------------------------------- geometry
    def arrangement(self, fi: int, chord_ids: Tuple[int, ...], wt: Optional[str]) -> Arrangement:
        key = (fi, wt, chord_ids)
        arr = self._arr.get(key)
        if arr is None:
            shape = self.spec.faces[fi].shape
            if wt is None:
                chords = []
                for t in self.fp.types():
                    ff = self.fp.get(t, fi)
                    if ff:
                        chords += list(ff.chords)
                chords = list(dict.fromkeys(chords))
            else:
                ff = self.fp.get(wt, fi)
                chords = [ff.chords[i] for i in chord_ids]
            pts = [(perimeter_point(shape, anchor_pos(p)), perimeter_point(shape, anchor_pos(q)))
                   for p, q in chords]
            arr = Arrangement(polygon(shape), pts)
            self._arr[key] = arr
        return arr

    def atoms(self) -> List[Tuple[int, int]]:
        """Open regions of core faces cut by every footprint chord: (face, region)."""
        out = []
        for f in sorted(self.region):
            arr = self.arrangement(self.ball.face_q[f], (), None)
            out += [(f, i) for i in range(len(arr.regions))]
        return out

    # -------------------------------------------------------- complement
    def complement(self, w: Optional[Wall]) -> "Complement":
        key = None if w is None else w.id
        if key in self._sides:
            return self._sides[key]
        c = _complement(self, w)
        self._sides[key] = c
        return c

    def interior_walls(self) -> List[Wall]:
        return [w for w in self.walls if w.interiorly_complete]

    def two_sided_walls(self) -> List[Wall]:
        return [w for w in self.interior_walls() if self.complement(w).count == 2]


def _pkey(p):
    return (p[0], p[1], p[2] if len(p) > 2 else 0)


@dataclass
class Complement:
    count: int
    piece_class: Dict[tuple, int]
    halving: Dict[int, int] = field(default_factory=dict)   # wall vertex -> link components (full link)
    wall: Optional[Wall] = None
    system: Optional[WallSystem] = None

    def side_of_vertex(self, v) -> Optional[int]:
        return self.piece_class.get(("V", v))

    def side_of_atom(self, f, i) -> Optional[int]:
        s = self.system
        w = self.wall
        if w is not None and f in w.fat_faces:
            return None
        fi = s.ball.face_q[f]
        ids = _face_chord_ids(w, f)
        sample = s.arrangement(fi, (), None).sample_points()[i]
        if not ids:
            return self.piece_class.get(("F", f, 0))
        r = s.arrangement(fi, ids, w.wall_type).locate(sample)
        return self.piece_class.get(("F", f, r))


def _face_chord_ids(w: Optional[Wall], f: int) -> Tuple[int, ...]:
    if w is None:
        return ()
    return tuple(ci for ff, ci in w.chords if ff == f)


def _complement(sys_: WallSystem, w: Optional[Wall]) -> Complement:
    ball = sys_.ball
    spec = sys_.spec
    core = sys_.core
    parent: Dict[tuple, tuple] = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    points = w.points if w else frozenset()
    wedges = w.wall_edges if w else frozenset()
    fats = w.fat_faces if w else frozenset()
    by_face: Dict[int, Tuple[int, ...]] = {}
    if w:
        tmp = {}
        for f, ci in w.chords:
            tmp.setdefault(f, []).append(ci)
        by_face = {f: tuple(v) for f, v in tmp.items()}
    on_edge: Dict[int, List[Fraction]] = {}
    for p in points:
        if p[0] == "e":
            on_edge.setdefault(p[1], []).append(p[2])

    def region_of(f, pt):
        ids = by_face.get(f, ())
        if not ids:
            return ("F", f, 0)
        return ("F", f, sys_.arrangement(ball.face_q[f], ids, w.wall_type).locate(pt))

    # face regions
    for f in core:
        if f in fats:
            continue
        ids = by_face.get(f, ())
        n = 1 if not ids else len(sys_.arrangement(ball.face_q[f], ids, w.wall_type).regions)
        for r in range(n):
            find(("F", f, r))

    # edge pieces glued to the face regions they bound
    def edge_cuts(e):
        return [Fraction(0)] + sorted(set(on_edge.get(e, ()))) + [Fraction(1)]

    for e in sys_.core_edges:
        if e in wedges:
            continue
        cuts = edge_cuts(e)
        for j in range(len(cuts) - 1):
            piece = ("E", e, j)
            find(piece)
            mid = (cuts[j] + cuts[j + 1]) / 2
            for f, k in ball.edge_faces[e]:
                if f not in core or f in fats:
                    continue
                s = spec.faces[ball.face_q[f]].boundary[k][1]
                frac = float(mid if s > 0 else 1 - mid)
                pt = edge_point_inside(spec.faces[ball.face_q[f]].shape, k, frac)
                union(piece, region_of(f, pt))

    halving = {}
    for x in sys_.core_vertices:
        groups = _vertex_groups(sys_, w, x, by_face, wedges, fats, edge_cuts, region_of)
        if ("v", x) not in points:
            find(("V", x))
            for g in groups:
                for item in g:
                    union(("V", x), item)
        else:
            for g in groups:
                for a, b in zip(g, g[1:]):
                    union(a, b)
            if ball.vert_complete[x]:
                halving[x] = _full_halving(sys_, w, x, by_face, wedges, fats)
    # classes numbered by their least piece; only classes meeting the region count
    least = {}
    for p in parent:
        r = find(p)
        k = _piece_key(p)
        if r not in least or k < least[r]:
            least[r] = k
    renum = {r: i for i, r in enumerate(sorted(least, key=least.get))}
    piece_class = {p: renum[find(p)] for p in parent}
    region = sys_.region
    inside = {piece_class[p] for p in parent
              if (p[0] == "F" and p[1] in region) or (p[0] == "V" and p[1] in sys_.region_vertices)
              or (p[0] == "E" and p[1] in sys_.region_edges)}
    return Complement(len(inside), piece_class, halving, w, sys_)


def _piece_key(p):
    return (p[0],) + tuple(int(x) if not isinstance(x, Fraction) else float(x) for x in p[1:])


def _corner_cuts(sys_, w, f, k, by_face):
    """Angles (from side k) of this wall's chords leaving corner k of ball face f."""
    if w is None or f not in by_face:
        return []
    ball = sys_.ball
    fi = ball.face_q[f]
    shape = sys_.spec.faces[fi].shape
    ff = sys_.fp.get(w.wall_type, fi)
    out = []
    for ci in by_face[f]:
        p, q = ff.chords[ci]
        for a, b in ((p, q), (q, p)):
            if a.vertex == k:
                out.append(direction_angle(shape, k, perimeter_point(shape, anchor_pos(b))))
    return sorted(out)


def _vertex_groups(sys_, w, x, by_face, wedges, fats, edge_cuts, region_of):
    """Local pieces around core vertex x, grouped by link components of (core link minus trace)."""
    ball = sys_.ball
    spec = sys_.spec
    core = sys_.core
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    global_of = {}
    for g, e in ball.germs[x].items():
        if e not in sys_.core_edges or e in wedges:
            continue
        node = ("g", g)
        find(node)
        cuts = edge_cuts(e)
        j = 0 if ball.edge_ends[e][0] == x else len(cuts) - 2
        global_of[node] = ("E", e, j)
    for (fi, k), f in ball.corners[x].items():
        if f not in core or f in fats:
            continue
        face = spec.faces[fi]
        g_prev, g_next = face.vertex_germs(k)
        cuts = _corner_cuts(sys_, w, f, k, by_face)
        corner = face.shape.corners[k].radians()
        bounds = [0.0] + cuts + [corner]
        prev_node = None
        for j in range(len(bounds) - 1):
            sec = ("s", f, k, j)
            find(sec)
            mid = (bounds[j] + bounds[j + 1]) / 2
            global_of[sec] = region_of(f, sector_point(face.shape, k, mid))
        nxt = ("g", g_next)
        prv = ("g", g_prev)
        if nxt in parent:
            union(("s", f, k, 0), nxt)
        if prv in parent:
            union(("s", f, k, len(bounds) - 2), prv)
    groups = {}
    for a in parent:
        groups.setdefault(find(a), []).append(global_of[a])
    return list(groups.values())


def wall_trace(sys_: WallSystem, w: Wall, x: int):
    """Trace of wall w in the full link at ball vertex x, in halving_components format."""
    ball = sys_.ball
    spec = sys_.spec
    trace = []
    for g, e in ball.germs[x].items():
        if e in w.wall_edges:
            trace.append((e, g[1]))
    by_face = {}
    for f, ci in w.chords:
        by_face.setdefault(f, []).append(ci)
    for (fi, k), f in ball.corners[x].items():
        if f in w.fat_faces:
            trace.append((f, k))
            continue
        corner = spec.faces[fi].shape.corners[k].radians()
        for ang in _corner_cuts(sys_, w, f, k, {f: tuple(by_face.get(f, ()))} if f in by_face else {}):
            # link edges run from the side k-1 germ to the side k germ
            t = Fraction(1) - Fraction(ang / corner).limit_denominator(720)
            trace.append(("pt", (f, k), t))
    return trace


def _full_halving(sys_, w, x, by_face, wedges, fats):
    return halving_components(link_at(sys_.ball, x), wall_trace(sys_, w, x))


# ------------------------------------------------------------------ queries

def extract_walls(ball: Ball, spec: Optional[ComplexSpec] = None) -> List[Wall]:
    if spec is not None:
        for wf in spec.footprints.values():
            for e in wf.entries:
                if not 0 <= e.face < len(spec.faces):
                    raise WallError(f"footprint references missing face {e.face}")
    return WallSystem(ball, spec).walls


def wall_is_simply_connected(sys_: WallSystem, w: Wall) -> bool:
    return wall_homology(sys_, w) == (0, [])


def wall_homology(sys_: WallSystem, w: Wall):
    """H1 of the wall as a 2-complex: points, chord and edge pieces, rhombus cells."""
    from .snf import homology
    ball = sys_.ball
    pts = sorted(w.points, key=_pkey)
    pid = {p: i for i, p in enumerate(pts)}
    edges = []
    for f, ci in w.chords:
        p, q = sys_.fp.get(w.wall_type, ball.face_q[f]).chords[ci]
        edges.append((pid[ball_point(ball, f, p)], pid[ball_point(ball, f, q)]))
    # wall edges split at wall points lying on them
    piece_of = {}
    for e in sorted(w.wall_edges):
        t, h = ball.edge_ends[e]
        inner = sorted(p for p in w.points if p[0] == "e" and p[1] == e)
        chain = [("v", t)] + inner + [("v", h)]
        piece_of[e] = []
        for a, b in zip(chain, chain[1:]):
            piece_of[e].append(len(edges))
            edges.append((pid[a], pid[b]))
    d1 = {}
    for k, (a, b) in enumerate(edges):
        if a != b:
            d1[(b, k)] = d1.get((b, k), 0) + 1
            d1[(a, k)] = d1.get((a, k), 0) - 1
    d2 = {}
    faces = sorted(w.fat_faces)
    for j, f in enumerate(faces):
        face = sys_.spec.faces[ball.face_q[f]]
        for e, (_, s) in zip(ball.face_edges[f], face.boundary):
            for k in piece_of[e]:
                d2[(k, j)] = d2.get((k, j), 0) + s
    return homology(len(pts), d1, len(edges), d2, len(faces))


def complement_components(sys_: WallSystem, w: Optional[Wall]) -> int:
    if w is not None and not w.interiorly_complete:
        raise WallError("wall is not interiorly complete")
    return sys_.complement(w).count


def separates(sys_: WallSystem, w: Wall, x: int, y: int) -> bool:
    if ("v", x) in w.points or ("v", y) in w.points:
        raise WallError("query endpoint lies on the wall; use an adjacent cell")
    c = sys_.complement(w)
    sx, sy = c.side_of_vertex(x), c.side_of_vertex(y)
    if sx is None or sy is None:
        raise WallError("query endpoint outside the core")
    return sx != sy


def crossing_number(sys_: WallSystem, x: int, y: int, walls: Optional[Sequence[Wall]] = None) -> int:
    """Number of interiorly complete walls separating vertices x and y.

    A wall through x or y separates nothing from it and is not counted.
    """
    if x == y:
        return 0
    walls = sys_.interior_walls() if walls is None else walls
    n = 0
    for w in walls:
        if not w.interiorly_complete or ("v", x) in w.points or ("v", y) in w.points:
            continue
        c = sys_.complement(w)
        sx, sy = c.side_of_vertex(x), c.side_of_vertex(y)
        if sx is not None and sy is not None and sx != sy:
            n += 1
    return n


def walls_through_cell(sys_: WallSystem, cell: tuple, walls: Optional[Sequence[Wall]] = None) -> int:
    """cell is ("vertex", v), ("edge", e) or ("face", f)."""
    walls = sys_.walls if walls is None else walls
    return sum(1 for w in walls if cell in w.carrier())


def refraction_points(sys_: WallSystem, w: Wall, patch: Optional[FlatPatch] = None) -> List[int]:
    """Wall vertices where some trace direction has no other trace direction at angle >= pi.

    With a patch, only the part of the trace inside patch faces is used, so a
    wall crossing a flat plane is judged by its line there.
    """
    ball = sys_.ball
    out = []
    allowed = None if patch is None else set(patch.faces)
    for x in sorted(w.vertices):
        if not ball.vert_complete[x]:
            continue
        link = link_at(ball, x)
        trace = wall_trace(sys_, w, x)
        dirs = []
        for item in trace:
            if item[0] == "pt":
                f = item[1][0]
                if allowed is not None and f not in allowed:
                    continue
                dirs.append((item[1], item[2]))
            elif isinstance(item[1], str):
                if allowed is None:
                    dirs.append(item)
        if len(dirs) < 2:
            continue
        bad = False
        for a in dirs:
            far = max(link_distance(link, _lp(a), _lp(b)) for b in dirs if b != a)
            if far < 1:
                bad = True
                break
        if bad:
            out.append(x)
    return out


def _lp(d):
    # link point: node (edge, end) or (corner key, t)
    return d


def shortest_path(ball: Ball, x: int, y: int) -> List[int]:
    """Vertex sequence of a shortest 1-skeleton path, ties broken by least vertex id."""
    prev = {x: None}
    dq = deque([x])
    while dq:
        u = dq.popleft()
        if u == y:
            break
        for v in ball.neighbors(u):
            if v not in prev:
                prev[v] = u
                dq.append(v)
    if y not in prev:
        raise WallError("no path")
    path = [y]
    while path[-1] != x:
        path.append(prev[path[-1]])
    return path[::-1]


def bowtie_count(ball: Ball, path: Sequence[int]) -> int:
    """Distinct bow-tie faces containing an edge of the path."""
    seen = set()
    for u, v in zip(path, path[1:]):
        for e in ball.germs[u].values():
            if v in ball.edge_ends[e]:
                for f, _ in ball.edge_faces[e]:
                    if ball.face_kind(f) == "bowtie":
                        seen.add(f)
    return len(seen)


# --------------------------------------------------------------- flat plane

def _chart(patch: FlatPatch, ball: Ball, f: int, anchor_pt) -> Tuple[Q3, Q3]:
    if anchor_pt[0] == "v":
        return patch.point(anchor_pt[1])
    e, t = anchor_pt[1], anchor_pt[2]
    a, b = ball.edge_ends[e]
    (ax, ay), (bx, by) = patch.point(a), patch.point(b)
    return (ax + (bx - ax) * t, ay + (by - ay) * t)


def wall_plane_intersection(sys_: WallSystem, w: Wall, patch: FlatPatch):
    """('empty', None) or ('straight_line', (A, B, C)) with A x + B y = C exactly.

    Raises WallError when the wall meets the patch in anything else.
    """
    ball = sys_.ball
    faces = set(patch.faces)
    segs = []
    for f, ci in w.chords:
        if f in faces:
            p, q = sys_.fp.get(w.wall_type, ball.face_q[f]).chords[ci]
            segs.append((_chart(patch, ball, f, ball_point(ball, f, p)),
                         _chart(patch, ball, f, ball_point(ball, f, q))))
    if any(f in faces for f in w.fat_faces) or any(
            any(e in ball.face_edges[f] for f in faces) for e in w.wall_edges):
        raise WallError("wall contains a 2-cell or edge of the flat patch")
    if not segs:
        return ("empty", None)
    (x0, y0), (x1, y1) = segs[0]
    A, B = y1 - y0, x0 - x1
    C = A * x0 + B * y0
    for p, q in segs:
        for (x, y) in (p, q):
            if A * x + B * y != C:
                raise WallError(f"wall {w.id} meets the flat patch in a non-straight set")
    return ("straight_line", (A, B, C))


def chart_distance(patch: FlatPatch, x: int, y: int) -> Q3:
    """Squared Euclidean chart distance, exact."""
    (ax, ay), (bx, by) = patch.point(x), patch.point(y)
    return (ax - bx) * (ax - bx) + (ay - by) * (ay - by)
