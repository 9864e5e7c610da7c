"""Data model, parser and geometric validation for polygonal 2-complex specs.

A spec document is JSON with keys ``shapes``, ``edges``, ``faces``, ``walls``
and ``metadata``. Side ``i`` of a face runs from its vertex ``i`` to vertex
``i+1``; corner ``i`` sits at vertex ``i``. A boundary entry ``[label, "+"]``
means the edge is traversed along its orientation, ``"-"`` (or the unicode
minus) against it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import json
import math
from typing import Dict, List, Optional, Sequence, Tuple

from .angles import Angle

FACE_KINDS = ("triangle", "rhombus", "bowtie")
WALL_TYPES = ("a", "b", "c", "d", "transverse")
CLOSURE_TOL = 1e-9

_MINUS = ("-", "−")


class SpecError(ValueError):
    """Raised for malformed or inconsistent spec documents."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


@dataclass(frozen=True)
class Shape:
    name: str
    sides: Tuple[Fraction, ...]
    corners: Tuple[Angle, ...]

    @property
    def n(self) -> int:
        return len(self.sides)

    def vertices_float(self) -> List[Tuple[float, float]]:
        """Plane development of the boundary: vertex 0 at the origin, side 0 along +x."""
        pts = [(0.0, 0.0)]
        x = y = 0.0
        heading = 0.0
        for i, s in enumerate(self.sides):
            x += float(s) * math.cos(heading)
            y += float(s) * math.sin(heading)
            pts.append((x, y))
            heading += math.pi - self.corners[(i + 1) % self.n].radians()
        return pts

    def closure_residual(self) -> float:
        pts = self.vertices_float()
        return math.hypot(pts[-1][0] - pts[0][0], pts[-1][1] - pts[0][1])


@dataclass(frozen=True)
class Anchor:
    """A boundary point of a face: a vertex, or a rational point on a side."""

    vertex: Optional[int] = None
    side: Optional[int] = None
    frac: Optional[Fraction] = None

    def normalized(self, n: int) -> "Anchor":
        # side endpoints are vertices
        if self.vertex is not None:
            return self
        if self.frac == 0:
            return Anchor(vertex=self.side)
        if self.frac == 1:
            return Anchor(vertex=(self.side + 1) % n)
        return self

    def point(self, shape: Shape) -> Tuple[float, float]:
        pts = shape.vertices_float()
        if self.vertex is not None:
            return pts[self.vertex]
        (x0, y0), (x1, y1) = pts[self.side], pts[self.side + 1]
        f = float(self.frac)
        return (x0 + f * (x1 - x0), y0 + f * (y1 - y0))

    def to_json(self):
        if self.vertex is not None:
            return {"vertex": self.vertex}
        return {"side": self.side, "frac": [self.frac.numerator, self.frac.denominator]}


@dataclass(frozen=True)
class FaceSpec:
    shape: Shape
    boundary: Tuple[Tuple[str, int], ...]  # (label, +1/-1)
    kind: str

    def vertex_germs(self, i: int):
        """Edge germs (label, 'in'/'out') of sides i-1 and i at corner i."""
        n = len(self.boundary)
        lab_prev, s_prev = self.boundary[(i - 1) % n]
        lab, s = self.boundary[i]
        g_prev = (lab_prev, "in" if s_prev > 0 else "out")
        g_next = (lab, "out" if s > 0 else "in")
        return g_prev, g_next


@dataclass(frozen=True)
class FootprintEntry:
    face: int
    segments: Tuple[Tuple[Anchor, Anchor], ...] = ()
    cell: bool = False


@dataclass(frozen=True)
class WallFootprint:
    wall_type: str
    entries: Tuple[FootprintEntry, ...]


@dataclass(frozen=True)
class ComplexSpec:
    shapes: Dict[str, Shape]
    edges: Tuple[str, ...]
    faces: Tuple[FaceSpec, ...]
    footprints: Dict[str, WallFootprint]
    metadata: dict = field(default_factory=dict)

    def edge_length(self, label: str) -> Fraction:
        for f in self.faces:
            for i, (lab, _) in enumerate(f.boundary):
                if lab == label:
                    return f.shape.sides[i]
        raise KeyError(label)


# ---------------------------------------------------------------- parsing

def _frac(v, where) -> Fraction:
    try:
        if isinstance(v, list):
            p, q = v
            if not isinstance(p, int) or not isinstance(q, int) or q <= 0:
                raise ValueError
            return Fraction(p, q)
        if isinstance(v, (int, str)):
            return Fraction(v)
    except (ValueError, ZeroDivisionError, TypeError):
        pass
    raise SpecError(f"bad rational {v!r}", where)


def _angle(v, where) -> Angle:
    f = _frac(v, where)
    try:
        return Angle.corner(f)
    except ValueError as e:
        raise SpecError(str(e), where) from None


def _anchor(d, n, where) -> Anchor:
    if not isinstance(d, dict):
        raise SpecError("anchor must be an object", where)
    if "vertex" in d:
        v = d["vertex"]
        if not isinstance(v, int) or not 0 <= v < n:
            raise SpecError(f"vertex index {v!r} out of range", where)
        return Anchor(vertex=v)
    if "side" in d and "frac" in d:
        s = d["side"]
        if not isinstance(s, int) or not 0 <= s < n:
            raise SpecError(f"side index {s!r} out of range", where)
        f = _frac(d["frac"], where)
        if not 0 <= f <= 1:
            raise SpecError(f"fraction {f} outside [0,1]", where)
        return Anchor(side=s, frac=f).normalized(n)
    raise SpecError("anchor needs 'vertex' or 'side'+'frac'", where)


def parse_complex_spec(text: str) -> ComplexSpec:
    """Parse and validate a spec document; raises SpecError on any problem."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"syntax error: {e.msg}", f"line {e.lineno} column {e.colno}") from None
    if not isinstance(doc, dict):
        raise SpecError("top level must be an object", "$")
    for key in ("shapes", "edges", "faces"):
        if key not in doc:
            raise SpecError(f"missing key {key!r}", "$")

    shapes: Dict[str, Shape] = {}
    for j, sd in enumerate(doc["shapes"]):
        where = f"shapes[{j}]"
        try:
            name = sd["name"]
            sides = tuple(_frac(s, where) for s in sd["sides"])
            corners = tuple(_angle(c, where) for c in sd["corners"])
        except (KeyError, TypeError):
            raise SpecError("shape needs name, sides, corners", where) from None
        if len(sides) != len(corners) or len(sides) < 3:
            raise SpecError("sides and corners must have equal length >= 3", where)
        if any(s <= 0 for s in sides):
            raise SpecError("side lengths must be positive", where)
        total = sum((c.coef for c in corners), Fraction(0))
        if total != len(sides) - 2:
            raise SpecError(
                f"angle-sum violation: corners of {name} sum to {Angle(total)}, "
                f"expected {len(sides) - 2}pi", where)
        if name in shapes:
            raise SpecError(f"duplicate shape {name!r}", where)
        shapes[name] = Shape(name, sides, corners)

    edges = []
    for j, e in enumerate(doc["edges"]):
        lab = e["label"] if isinstance(e, dict) else e
        if not isinstance(lab, str) or not lab:
            raise SpecError("edge label must be a non-empty string", f"edges[{j}]")
        if lab in edges:
            raise SpecError(f"duplicate edge label {lab!r}", f"edges[{j}]")
        edges.append(lab)
    declared_len = {e["label"]: _frac(e["length"], f"edges[{j}]")
                    for j, e in enumerate(doc["edges"]) if isinstance(e, dict) and "length" in e}

    faces = []
    for j, fd in enumerate(doc["faces"]):
        where = f"faces[{j}]"
        if fd.get("shape") not in shapes:
            raise SpecError(f"unknown shape {fd.get('shape')!r}", where)
        shape = shapes[fd["shape"]]
        bnd = []
        for k, item in enumerate(fd.get("boundary", [])):
            try:
                lab, o = item
            except (TypeError, ValueError):
                raise SpecError("boundary entries are [label, orientation]", f"{where}.boundary[{k}]") from None
            if lab not in edges:
                raise SpecError(f"unknown edge {lab!r}", f"{where}.boundary[{k}]")
            if o == "+":
                sgn = 1
            elif o in _MINUS:
                sgn = -1
            else:
                raise SpecError(f"bad orientation {o!r}", f"{where}.boundary[{k}]")
            bnd.append((lab, sgn))
        if len(bnd) != shape.n:
            raise SpecError(f"boundary has {len(bnd)} sides, shape {shape.name} has {shape.n}", where)
        kind = fd.get("kind")
        if kind not in FACE_KINDS:
            raise SpecError(f"kind must be one of {FACE_KINDS}", where)
        faces.append(FaceSpec(shape, tuple(bnd), kind))

    lengths: Dict[str, Fraction] = dict(declared_len)
    for j, f in enumerate(faces):
        for k, (lab, _) in enumerate(f.boundary):
            L = f.shape.sides[k]
            if lab in lengths and lengths[lab] != L:
                raise SpecError(
                    f"mismatched glued-edge lengths for {lab!r}: {lengths[lab]} vs {L}",
                    f"faces[{j}].boundary[{k}]")
            lengths[lab] = L
    unused = [e for e in edges if e not in lengths]
    if unused:
        raise SpecError(f"edges never used by a face: {unused}", "edges")

    footprints: Dict[str, WallFootprint] = {}
    for wt, entries in (doc.get("walls") or {}).items():
        if wt not in WALL_TYPES:
            raise SpecError(f"unknown wall type {wt!r}", f"walls.{wt}")
        parsed = []
        for k, ed in enumerate(entries):
            where = f"walls.{wt}[{k}]"
            fi = ed.get("face")
            if not isinstance(fi, int) or not 0 <= fi < len(faces):
                raise SpecError(f"footprint references missing face {fi!r}", where)
            n = faces[fi].shape.n
            segs = []
            for s in ed.get("segments", []):
                p, q = _anchor(s[0], n, where), _anchor(s[1], n, where)
                if p == q:
                    raise SpecError("degenerate segment", where)
                segs.append((p, q))
            cell = bool(ed.get("cell", False))
            if cell and faces[fi].kind != "rhombus":
                raise SpecError("only rhombi may be wall cells", where)
            parsed.append(FootprintEntry(fi, tuple(segs), cell))
        footprints[wt] = WallFootprint(wt, tuple(parsed))
    for wf in footprints.values():
        for e in wf.entries:
            for p, q in e.segments:
                if not _segment_inside(faces[e.face].shape, p, q):
                    raise SpecError(f"segment leaves face {e.face}", f"walls.{wf.wall_type}")

    meta = dict(doc.get("metadata") or {})
    return ComplexSpec(shapes, tuple(edges), tuple(faces), footprints, meta)


def load_spec(path) -> ComplexSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_complex_spec(fh.read())


def _segment_inside(shape: Shape, p: Anchor, q: Anchor) -> bool:
    # both ends are on the boundary; a chord is inside iff its midpoint is in the closed polygon
    pts = shape.vertices_float()[:-1]
    (x0, y0), (x1, y1) = p.point(shape), q.point(shape)
    return _in_polygon(pts, ((x0 + x1) / 2, (y0 + y1) / 2))


def _in_polygon(pts, pt, tol=1e-12) -> bool:
    x, y = pt
    n = len(pts)
    inside = False
    for i in range(n):
        (ax, ay), (bx, by) = pts[i], pts[(i + 1) % n]
        cross = (bx - ax) * (y - ay) - (by - ay) * (x - ax)
        if abs(cross) < tol and min(ax, bx) - tol <= x <= max(ax, bx) + tol \
                and min(ay, by) - tol <= y <= max(ay, by) + tol:
            return True
        if (ay > y) != (by > y):
            xi = ax + (y - ay) * (bx - ax) / (by - ay)
            if xi > x:
                inside = not inside
    return inside


def serialize_spec(spec: ComplexSpec) -> str:
    """Inverse of parse_complex_spec (up to formatting)."""
    shape_names = list(spec.shapes)
    doc = {
        "shapes": [
            {"name": s.name,
             "sides": [[x.numerator, x.denominator] for x in s.sides],
             "corners": [c.to_json() for c in s.corners]}
            for s in spec.shapes.values()],
        "edges": [{"label": e, "length": [spec.edge_length(e).numerator, spec.edge_length(e).denominator]}
                  for e in spec.edges],
        "faces": [
            {"shape": f.shape.name, "kind": f.kind,
             "boundary": [[lab, "+" if s > 0 else "-"] for lab, s in f.boundary]}
            for f in spec.faces],
        "walls": {
            wt: [dict({"face": e.face}, **({"cell": True} if e.cell else {}),
                      **({"segments": [[p.to_json(), q.to_json()] for p, q in e.segments]}
                         if e.segments else {}))
                 for e in wf.entries]
            for wt, wf in spec.footprints.items()},
        "metadata": spec.metadata,
    }
    assert set(shape_names) == set(spec.shapes)
    return json.dumps(doc, indent=1, ensure_ascii=False)


# ---------------------------------------------------------- quotient data

class _UF:
    def __init__(self):
        self.p = {}

    def find(self, x):
        self.p.setdefault(x, x)
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class QuotientVertices:
    """Vertex classes of the glued complex.

    ``corner_vertex[(f, i)]`` and ``germ_vertex[(label, 'out'|'in')]`` give
    the quotient vertex id; ``names`` holds a readable name per vertex.
    """

    count: int
    corner_vertex: Dict[Tuple[int, int], int]
    germ_vertex: Dict[Tuple[str, str], int]
    names: Tuple[str, ...]


def quotient_vertices(spec: ComplexSpec) -> QuotientVertices:
    uf = _UF()
    for fi, f in enumerate(spec.faces):
        for i in range(f.shape.n):
            g_prev, g_next = f.vertex_germs(i)
            uf.union(("c", fi, i), ("g",) + g_prev)
            uf.union(("c", fi, i), ("g",) + g_next)
    roots = {}
    order = []
    # number vertices by first appearance of an edge germ in edge order (tail first)
    for lab in spec.edges:
        for end in ("out", "in"):
            r = uf.find(("g", lab, end))
            if r not in roots:
                roots[r] = len(roots)
                order.append(f"{lab}.{'tail' if end == 'out' else 'head'}")
    corner_vertex = {}
    for fi, f in enumerate(spec.faces):
        for i in range(f.shape.n):
            corner_vertex[(fi, i)] = roots[uf.find(("c", fi, i))]
    germ_vertex = {(lab, end): roots[uf.find(("g", lab, end))]
                   for lab in spec.edges for end in ("out", "in")}
    names = spec.metadata.get("vertex_names")
    if not names or len(names) != len(roots):
        names = [f"v{k}" for k in range(len(roots))]
    return QuotientVertices(len(roots), corner_vertex, germ_vertex, tuple(names))


def vertex_index(spec: ComplexSpec, name) -> int:
    qv = quotient_vertices(spec)
    if isinstance(name, int):
        if 0 <= name < qv.count:
            return name
    elif name in qv.names:
        return qv.names.index(name)
    elif isinstance(name, str) and name.startswith("v") and name[1:].isdigit():
        k = int(name[1:])
        if k < qv.count:
            return k
    raise SpecError(f"unknown quotient vertex {name!r}")


@dataclass
class ValidationReport:
    closure_residuals: Dict[str, float]
    length_consistency: Dict[str, bool]
    quotient_vertex_count: int
    quotient_edge_count: int
    quotient_face_count: int
    vertex_names: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return (all(r < CLOSURE_TOL for r in self.closure_residuals.values())
                and all(self.length_consistency.values()))

    @property
    def euler_characteristic(self) -> int:
        return self.quotient_vertex_count - self.quotient_edge_count + self.quotient_face_count


def validate_geometry(spec: ComplexSpec) -> ValidationReport:
    residuals = {name: s.closure_residual() for name, s in spec.shapes.items()}
    seen: Dict[str, set] = {}
    for f in spec.faces:
        for k, (lab, _) in enumerate(f.boundary):
            seen.setdefault(lab, set()).add(f.shape.sides[k])
    consistency = {lab: len(v) == 1 for lab, v in seen.items()}
    qv = quotient_vertices(spec)
    return ValidationReport(residuals, consistency, qv.count, len(spec.edges), len(spec.faces), qv.names)


def base_links(spec: ComplexSpec):
    """LinkGraph of every quotient vertex, keyed by quotient vertex id."""
    from .linkgraph import LinkGraph

    qv = quotient_vertices(spec)
    links = {v: LinkGraph(tag=qv.names[v]) for v in range(qv.count)}
    for lab in spec.edges:
        for end in ("out", "in"):
            links[qv.germ_vertex[(lab, end)]].add_node((lab, end))
    for fi, f in enumerate(spec.faces):
        for i in range(f.shape.n):
            v = qv.corner_vertex[(fi, i)]
            g_prev, g_next = f.vertex_germs(i)
            if g_prev not in links[v].nodes or g_next not in links[v].nodes:
                raise SpecError(f"dangling edge germ at corner {i} of face {fi}")
            links[v].add_edge(g_prev, g_next, f.shape.corners[i], key=(fi, i))
    return links
