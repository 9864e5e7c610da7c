"""Finite balls of the universal cover by development with folding.

Vertices are completed in breadth-first order: completing a vertex attaches
a lift of every face corner of its quotient link. Freshly attached faces
are folded onto existing cells whenever two cells would occupy the same
edge germ or the same face corner at a vertex (Stallings-style folding), so
every vertex link immerses in the quotient link, and completed vertices
carry the full quotient link.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
import json
from typing import Dict, List, Optional, Tuple

from .complex_core import ComplexSpec, base_links, quotient_vertices, vertex_index
from .linkgraph import LinkGraph
from .snf import homology
from .qsqrt3 import Q3

DEFAULT_CAP = 5_000_000


class DevelopmentError(RuntimeError):
    pass


class CellCapExceeded(DevelopmentError):
    def __init__(self, cap, frontier):
        self.frontier = frontier
        super().__init__(f"cell cap {cap} exceeded with frontier of {frontier} vertices")


@dataclass
class Ball:
    """A finite simply connected piece of the universal cover.

    ``edge_ends[e] = (tail, head)``; ``face_verts[f][k]`` is vertex k of the
    face polygon and ``face_edges[f][k]`` its side k. ``germs[v]`` maps
    quotient germs to ball edges and ``corners[v]`` maps quotient corners
    (face index, corner index) to ball faces.
    """

    spec: ComplexSpec
    radius: int
    base: int
    vert_q: List[int]
    vert_dist: List[int]
    vert_complete: List[bool]
    edge_label: List[str]
    edge_ends: List[Tuple[int, int]]
    face_q: List[int]
    face_verts: List[Tuple[int, ...]]
    face_edges: List[Tuple[int, ...]]
    germs: List[Dict[Tuple[str, str], int]]
    corners: List[Dict[Tuple[int, int], int]]
    edge_faces: List[List[Tuple[int, int]]] = field(default_factory=list)

    @property
    def n_vertices(self):
        return len(self.vert_q)

    @property
    def n_edges(self):
        return len(self.edge_label)

    @property
    def n_faces(self):
        return len(self.face_q)

    def vertex_interior(self, v) -> bool:
        return self.vert_complete[v]

    def edge_interior(self, e) -> bool:
        t, h = self.edge_ends[e]
        return self.vert_complete[t] or self.vert_complete[h]

    def face_interior(self, f) -> bool:
        return all(self.vert_complete[v] for v in self.face_verts[f])

    def face_kind(self, f) -> str:
        return self.spec.faces[self.face_q[f]].kind

    def neighbors(self, v):
        out = []
        for e in self.germs[v].values():
            t, h = self.edge_ends[e]
            out.append(h if t == v else t)
        return sorted(set(out))

    def distances_from(self, src) -> List[Optional[int]]:
        dist = [None] * self.n_vertices
        dist[src] = 0
        dq = deque([src])
        while dq:
            x = dq.popleft()
            for y in self.neighbors(x):
                if dist[y] is None:
                    dist[y] = dist[x] + 1
                    dq.append(y)
        return dist

    def to_json(self) -> dict:
        names = quotient_vertices(self.spec).names
        return {
            "radius": self.radius,
            "base": 0,
            "vertices": [{"id": v, "quotient": names[self.vert_q[v]], "distance": self.vert_dist[v],
                          "interior": self.vert_complete[v]} for v in range(self.n_vertices)],
            "edges": [{"id": e, "label": self.edge_label[e], "tail": t, "head": h,
                       "interior": self.edge_interior(e)}
                      for e, (t, h) in enumerate(self.edge_ends)],
            "faces": [{"id": f, "quotient": self.face_q[f], "vertices": list(self.face_verts[f]),
                       "edges": list(self.face_edges[f]), "interior": self.face_interior(f)}
                      for f in range(self.n_faces)],
        }

    def export_json(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"), sort_keys=True)


class _Builder:
    def __init__(self, spec: ComplexSpec, cap: int):
        self.spec = spec
        self.cap = cap
        self.qv = quotient_vertices(spec)
        self.links = base_links(spec)
        self.vq: List[int] = []
        self.vpar: List[int] = []
        self.vgerm: List[Dict] = []
        self.vcorner: List[Dict] = []
        self.vdone: List[bool] = []
        self.elab: List[str] = []
        self.eends: List[List[int]] = []
        self.epar: List[int] = []
        self.fq: List[int] = []
        self.fverts: List[List[int]] = []
        self.fedges: List[List[int]] = []
        self.fpar: List[int] = []
        self.work: deque = deque()

    # union-find helpers
    def fv(self, x):
        p = self.vpar
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def fe(self, x):
        p = self.epar
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def ff(self, x):
        p = self.fpar
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def new_vertex(self, q):
        self.vq.append(q)
        self.vpar.append(len(self.vq) - 1)
        self.vgerm.append({})
        self.vcorner.append({})
        self.vdone.append(False)
        return len(self.vq) - 1

    def new_face(self, fi):
        """Fresh disjoint copy of quotient face fi; returns its id."""
        face = self.spec.faces[fi]
        n = face.shape.n
        if len(self.vq) + len(self.elab) + len(self.fq) > self.cap:
            raise CellCapExceeded(self.cap, len(self.work))
        verts = [self.new_vertex(self.qv.corner_vertex[(fi, k)]) for k in range(n)]
        edges = []
        for k, (lab, s) in enumerate(face.boundary):
            a, b = verts[k], verts[(k + 1) % n]
            self.elab.append(lab)
            self.eends.append([a, b] if s > 0 else [b, a])
            self.epar.append(len(self.elab) - 1)
            edges.append(len(self.elab) - 1)
        f = len(self.fq)
        self.fq.append(fi)
        self.fverts.append(verts)
        self.fedges.append(edges)
        self.fpar.append(f)
        for k in range(n):
            g_prev, g_next = face.vertex_germs(k)
            v = verts[k]
            self.vgerm[v][g_prev] = edges[(k - 1) % n]
            self.vgerm[v][g_next] = edges[k]
            self.vcorner[v][(fi, k)] = f
        return f

    def merge_vertices(self, a, b):
        self.work.append(("v", a, b))
        self._drain()

    def _drain(self):
        while self.work:
            kind, a, b = self.work.popleft()
            if kind == "v":
                ra, rb = self.fv(a), self.fv(b)
                if ra == rb:
                    continue
                if self.vq[ra] != self.vq[rb]:
                    raise DevelopmentError("link mismatch: folding identifies different quotient vertices")
                r, s = min(ra, rb), max(ra, rb)
                self.vpar[s] = r
                for g, e in self.vgerm[s].items():
                    if g in self.vgerm[r]:
                        self.work.append(("e", self.vgerm[r][g], e))
                    else:
                        self.vgerm[r][g] = e
                for c, f in self.vcorner[s].items():
                    if c in self.vcorner[r]:
                        self.work.append(("f", self.vcorner[r][c], f))
                    else:
                        self.vcorner[r][c] = f
                self.vdone[r] = self.vdone[r] or self.vdone[s]
                self.vgerm[s] = {}
                self.vcorner[s] = {}
            elif kind == "e":
                ra, rb = self.fe(a), self.fe(b)
                if ra == rb:
                    continue
                r, s = min(ra, rb), max(ra, rb)
                self.epar[s] = r
                self.work.append(("v", self.eends[r][0], self.eends[s][0]))
                self.work.append(("v", self.eends[r][1], self.eends[s][1]))
            else:
                ra, rb = self.ff(a), self.ff(b)
                if ra == rb:
                    continue
                r, s = min(ra, rb), max(ra, rb)
                self.fpar[s] = r
                for x, y in zip(self.fverts[r], self.fverts[s]):
                    self.work.append(("v", x, y))
                for x, y in zip(self.fedges[r], self.fedges[s]):
                    self.work.append(("e", x, y))

    def complete(self, x):
        """Attach every missing corner of the quotient link at vertex x."""
        link = self.links[self.vq[x]]
        corner_list = [(key, u, v) for (u, v, _, key) in link.edges]
        while True:
            x = self.fv(x)
            have_g = self.vgerm[x]
            have_c = self.vcorner[x]
            todo = None
            for key, u, v in corner_list:
                if key not in have_c and (u in have_g or v in have_g or not have_g):
                    todo = key
                    break
            if todo is None:
                break
            fi, k = todo
            f = self.new_face(fi)
            self.merge_vertices(x, self.fverts[f][k])
        x = self.fv(x)
        if len(self.vcorner[x]) != len(corner_list):
            raise DevelopmentError("quotient link is disconnected; cannot complete vertex")
        self.vdone[x] = True
        return x


def build_ball(spec: ComplexSpec, radius: int, base=0, cap: int = DEFAULT_CAP) -> Ball:
    """Develop every vertex within 1-skeleton distance radius-1 of the base.

    Radius 0 gives the base vertex alone. The result is renumbered by the
    ordering rule: vertices by (distance, creation), edges by (nearer end
    distance, label order, creation), faces by (nearest vertex distance,
    quotient face index, least attaching edge id).
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    b = _Builder(spec, cap)
    q0 = vertex_index(spec, base)
    root = b.new_vertex(q0)
    dist = {root: 0}
    queue = deque([root])
    while queue:
        x = b.fv(queue.popleft())
        d = dist[x]
        if d >= radius or b.vdone[x]:
            continue
        x = b.complete(x)
        for e in list(b.vgerm[x].values()):
            for y in b.eends[b.fe(e)]:
                y = b.fv(y)
                if y != x and y not in dist:
                    dist[y] = d + 1
                    queue.append(y)
        # folding may have merged queued vertices; keep the smaller distance on the root
        for y in list(dist):
            ry = b.fv(y)
            if ry != y:
                dist[ry] = min(dist.get(ry, dist[y]), dist[y])
                del dist[y]
    return _finalize(b, radius, root)


def _finalize(b: _Builder, radius: int, root: int) -> Ball:
    spec = b.spec
    vroots = sorted({b.fv(v) for v in range(len(b.vq))})
    eroots = sorted({b.fe(e) for e in range(len(b.elab))})
    froots = sorted({b.ff(f) for f in range(len(b.fq))})
    root = b.fv(root)
    # true 1-skeleton distances
    adj = {v: set() for v in vroots}
    for e in eroots:
        t, h = b.fv(b.eends[e][0]), b.fv(b.eends[e][1])
        adj[t].add(h)
        adj[h].add(t)
    dist = {root: 0}
    dq = deque([root])
    while dq:
        x = dq.popleft()
        for y in sorted(adj[x]):
            if y not in dist:
                dist[y] = dist[x] + 1
                dq.append(y)
    vorder = sorted(vroots, key=lambda v: (dist[v], v))
    vid = {v: k for k, v in enumerate(vorder)}
    lab_idx = {lab: k for k, lab in enumerate(spec.edges)}

    def eends(e):
        return vid[b.fv(b.eends[e][0])], vid[b.fv(b.eends[e][1])]

    eorder = sorted(eroots, key=lambda e: (min(eends(e)), lab_idx[b.elab[e]], e))
    eid = {e: k for k, e in enumerate(eorder)}
    forder = sorted(froots, key=lambda f: (min(vid[b.fv(v)] for v in b.fverts[f]),
                                           b.fq[f], min(eid[b.fe(e)] for e in b.fedges[f]), f))
    fid = {f: k for k, f in enumerate(forder)}
    ball = Ball(
        spec=spec, radius=radius, base=0,
        vert_q=[b.vq[v] for v in vorder],
        vert_dist=[dist[v] for v in vorder],
        vert_complete=[b.vdone[v] for v in vorder],
        edge_label=[b.elab[e] for e in eorder],
        edge_ends=[eends(e) for e in eorder],
        face_q=[b.fq[f] for f in forder],
        face_verts=[tuple(vid[b.fv(v)] for v in b.fverts[f]) for f in forder],
        face_edges=[tuple(eid[b.fe(e)] for e in b.fedges[f]) for f in forder],
        germs=[{g: eid[b.fe(e)] for g, e in b.vgerm[v].items()} for v in vorder],
        corners=[{c: fid[b.ff(f)] for c, f in b.vcorner[v].items()} for v in vorder],
    )
    ef = [[] for _ in range(ball.n_edges)]
    for f, es in enumerate(ball.face_edges):
        for k, e in enumerate(es):
            ef[e].append((f, k))
    ball.edge_faces = ef
    return ball


# ------------------------------------------------------------------ links

def link_at(ball: Ball, v: int) -> LinkGraph:
    """Angle-weighted corner graph at a ball vertex; nodes are (edge, 'out'|'in')."""
    if not 0 <= v < ball.n_vertices:
        raise KeyError(f"vertex {v} not in ball")
    g = LinkGraph(tag=("ball", v))
    for (lab, end), e in sorted(ball.germs[v].items(), key=lambda t: t[1]):
        g.add_node((e, end))
    for (fi, k), f in sorted(ball.corners[v].items(), key=lambda t: t[1]):
        face = ball.spec.faces[fi]
        g_prev, g_next = face.vertex_germs(k)
        n = face.shape.n
        u = (ball.face_edges[f][(k - 1) % n], g_prev[1])
        w = (ball.face_edges[f][k], g_next[1])
        g.add_edge(u, w, face.shape.corners[k], key=(f, k))
    return g


def link_matches_quotient(ball: Ball, v: int) -> bool:
    """True iff the germ map is an angle-preserving isomorphism onto the quotient link."""
    q = base_links(ball.spec)[ball.vert_q[v]]
    if len(ball.germs[v]) != len(q.nodes) or len(ball.corners[v]) != len(q.edges):
        return False
    qedges = {key: (frozenset((a, b)), w) for a, b, w, key in q.edges}
    for (fi, k), f in ball.corners[v].items():
        face = ball.spec.faces[fi]
        g_prev, g_next = face.vertex_germs(k)
        if qedges.get((fi, k)) != (frozenset((g_prev, g_next)), face.shape.corners[k]):
            return False
        n = face.shape.n
        if ball.germs[v].get(g_prev) != ball.face_edges[f][(k - 1) % n]:
            return False
        if ball.germs[v].get(g_next) != ball.face_edges[f][k]:
            return False
    return True


# --------------------------------------------------------------- homology

def boundary_maps(verts: int, edge_ends, face_edge_signs):
    d1 = {}
    for e, (t, h) in enumerate(edge_ends):
        if t != h:
            d1[(h, e)] = d1.get((h, e), 0) + 1
            d1[(t, e)] = d1.get((t, e), 0) - 1
    d2 = {}
    for f, items in enumerate(face_edge_signs):
        for e, s in items:
            d2[(e, f)] = d2.get((e, f), 0) + s
    d2 = {k: v for k, v in d2.items() if v}
    return d1, d2


def homology_h1(ball: Ball) -> Tuple[int, List[int]]:
    fes = []
    for f in range(ball.n_faces):
        face = ball.spec.faces[ball.face_q[f]]
        fes.append([(e, s) for e, (_, s) in zip(ball.face_edges[f], face.boundary)])
    d1, d2 = boundary_maps(ball.n_vertices, ball.edge_ends, fes)
    return homology(ball.n_vertices, d1, ball.n_edges, d2, ball.n_faces)


def quotient_h1(spec: ComplexSpec) -> Tuple[int, List[int]]:
    """H1 of the quotient complex itself, from the same Smith normal form routine."""
    qv = quotient_vertices(spec)
    lab = {l: k for k, l in enumerate(spec.edges)}
    ends = [(qv.germ_vertex[(l, "out")], qv.germ_vertex[(l, "in")]) for l in spec.edges]
    fes = [[(lab[l], s) for l, s in f.boundary] for f in spec.faces]
    d1, d2 = boundary_maps(qv.count, ends, fes)
    return homology(qv.count, d1, len(spec.edges), d2, len(spec.faces))


# ------------------------------------------------------------ flat patches

# unit lattice directions: k*60 degrees, as (i, j) steps in the basis
# e1 = (1, 0), e2 = (1/2, sqrt3/2)
_DIRS = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]


@dataclass
class FlatPatch:
    """Triangles of a ball developed isometrically into the triangular lattice.

    ``coords[v] = (i, j)`` places vertex v at i*e1 + j*e2.
    """

    faces: List[int]
    seed: int
    coords: Dict[int, Tuple[int, int]]
    patch_radius: int

    def point(self, v) -> Tuple[Q3, Q3]:
        i, j = self.coords[v]
        return lattice_point(i, j)


def lattice_point(i, j) -> Tuple[Q3, Q3]:
    from fractions import Fraction
    return Q3(i + Fraction(j, 2)), Q3(0, Fraction(j, 2))


def develop_flat_plane(ball: Ball, seed: int) -> FlatPatch:
    """Grow the maximal flat patch of triangles around a seed triangle.

    A neighbouring triangle is adjoined across an edge when its developed
    third vertex is consistent with every coordinate already assigned and no
    two patch vertices land on the same lattice point.
    """
    if ball.face_kind(seed) != "triangle":
        raise ValueError("seed face is not a triangle")
    coords: Dict[int, Tuple[int, int]] = {}
    occupied: Dict[Tuple[int, int], int] = {}
    a, b, c = ball.face_verts[seed]
    for v, p in ((a, (0, 0)), (b, (1, 0)), (c, (0, 1))):
        coords[v] = p
        occupied[p] = v
    faces = [seed]
    in_patch = {seed}
    dq = deque([seed])
    while dq:
        f = dq.popleft()
        for e in ball.face_edges[f]:
            for g, _ in ball.edge_faces[e]:
                if g in in_patch or ball.face_kind(g) != "triangle":
                    continue
                t, h = ball.edge_ends[e]
                third = next(v for v in ball.face_verts[g] if v not in (t, h))
                # the apex of g lies on the opposite side of e from the apex of f
                other = next(v for v in ball.face_verts[f] if v not in (t, h))
                p = _reflect(coords[t], coords[h], coords[other])
                if third in coords and coords[third] != p:
                    continue
                if third not in coords and p in occupied:
                    continue
                coords[third] = p
                occupied[p] = third
                in_patch.add(g)
                faces.append(g)
                dq.append(g)
    verts = list(coords)
    prad = max(max(abs(i), abs(j), abs(i + j)) for i, j in coords.values())
    return FlatPatch(sorted(faces), seed, coords, prad)


def _reflect(p, q, r):
    # fourth vertex of the rhombus p, q, r in lattice coordinates
    return (p[0] + q[0] - r[0], p[1] + q[1] - r[1])


def maximal_flat_patches(ball: Ball) -> List[FlatPatch]:
    seen = set()
    out = []
    for f in range(ball.n_faces):
        if f in seen or ball.face_kind(f) != "triangle":
            continue
        p = develop_flat_plane(ball, f)
        seen.update(p.faces)
        out.append(p)
    return out
