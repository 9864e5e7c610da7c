"""SVG figures: flat patches with wall lines, and unfolded wall carrier strips."""
from __future__ import annotations

import os
from typing import Dict, Iterable, List, Sequence, Tuple

from .facegeom import anchor_pos, perimeter_point, polygon
from .walls import Wall, WallSystem, ball_point, _chart

Point = Tuple[float, float]

COLORS = {"a": "#d62728", "b": "#1f77b4", "c": "#2ca02c", "d": "#9467bd", "transverse": "#ff7f0e"}
FILL = {"triangle": "#f2f2f2", "rhombus": "#e6e6fa", "bowtie": "#fdebd0"}


def _r(x: float) -> str:
    v = round(float(x), 6) + 0.0
    return f"{v:.6f}".rstrip("0").rstrip(".")


def render_svg(polygons: Sequence[Tuple[List[Point], str]],
               segments: Sequence[Tuple[Point, Point, str]] = (),
               points: Sequence[Tuple[Point, str]] = (), scale: float = 40.0) -> str:
    """Polygons, coloured segments and marked points; y points up in the input."""
    xs = [p[0] for poly, _ in polygons for p in poly] + [p[0] for s in segments for p in s[:2]]
    ys = [p[1] for poly, _ in polygons for p in poly] + [p[1] for s in segments for p in s[:2]]
    if not xs:
        return ('<svg xmlns="http://www.w3.org/2000/svg" width="1" height="1" '
                'viewBox="0 0 1 1"></svg>\n')
    x0, x1, y0, y1 = min(xs) - 0.5, max(xs) + 0.5, min(ys) - 0.5, max(ys) + 0.5

    def tx(p):
        return _r((p[0] - x0) * scale), _r((y1 - p[1]) * scale)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_r((x1 - x0) * scale)}" '
           f'height="{_r((y1 - y0) * scale)}">']
    for poly, fill in polygons:
        pts = " ".join(",".join(tx(p)) for p in poly)
        out.append(f'<polygon points="{pts}" fill="{fill}" stroke="#555" stroke-width="0.5"/>')
    for p, q, color in segments:
        (a, b), (c, d) = tx(p), tx(q)
        out.append(f'<line x1="{a}" y1="{b}" x2="{c}" y2="{d}" stroke="{color}" stroke-width="2"/>')
    for p, color in points:
        a, b = tx(p)
        out.append(f'<circle cx="{a}" cy="{b}" r="3" fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def patch_svg(sys_: WallSystem, patch, walls: Iterable[Wall] = None) -> str:
    ball = sys_.ball
    walls = sys_.interior_walls() if walls is None else list(walls)
    faces = set(patch.faces)
    polys = []
    for f in sorted(faces):
        polys.append(([tuple(map(float, patch.point(v))) for v in ball.face_verts[f]], FILL["triangle"]))
    segs = []
    for w in walls:
        for f, ci in w.chords:
            if f not in faces:
                continue
            p, q = sys_.fp.get(w.wall_type, ball.face_q[f]).chords[ci]
            a = tuple(map(float, _chart(patch, ball, f, ball_point(ball, f, p))))
            b = tuple(map(float, _chart(patch, ball, f, ball_point(ball, f, q))))
            segs.append((a, b, COLORS.get(w.wall_type, "#000")))
    return render_svg(polys, segs)


def _place(local: List[complex], i: int, j: int, X: complex, Y: complex, mirror: bool) -> List[complex]:
    pts = [z.conjugate() for z in local] if mirror else list(local)
    a = (Y - X) / (pts[j] - pts[i])
    return [a * (z - pts[i]) + X for z in pts]


def strip_layout(sys_: WallSystem, w: Wall, max_faces: int = 60) -> Dict[int, List[complex]]:
    """Unfold the carrier faces of w into the plane by successive edge gluings."""
    ball = sys_.ball
    carrier = sorted(f for f in w.carrier_faces if f in sys_.region) or sorted(w.carrier_faces)
    if not carrier:
        return {}
    cset = set(carrier)
    local = {f: [complex(*p) for p in polygon(ball.spec.faces[ball.face_q[f]].shape)] for f in carrier}
    placed = {carrier[0]: local[carrier[0]]}
    queue = [carrier[0]]
    while queue and len(placed) < max_faces:
        f = queue.pop(0)
        for k, e in enumerate(ball.face_edges[f]):
            for g, m in ball.edge_faces[e]:
                if g in placed or g not in cset or g == f:
                    continue
                n_g = len(local[g])
                X, Y = placed[f][(k + 1) % len(placed[f])], placed[f][k]
                cand = _place(local[g], m, (m + 1) % n_g, X, Y, False)
                cf = sum(placed[f]) / len(placed[f])
                cg = sum(cand) / n_g
                d = Y - X
                if ((cf - X) * d.conjugate()).imag * ((cg - X) * d.conjugate()).imag > 0:
                    cand = _place(local[g], m, (m + 1) % n_g, X, Y, True)
                placed[g] = cand
                queue.append(g)
                if len(placed) >= max_faces:
                    break
    return placed


def strip_svg(sys_: WallSystem, w: Wall, max_faces: int = 60) -> str:
    ball = sys_.ball
    lay = strip_layout(sys_, w, max_faces)
    polys, segs = [], []
    color = COLORS.get(w.wall_type, "#000")
    for f in sorted(lay):
        pts = lay[f]
        polys.append(([(z.real, z.imag) for z in pts], FILL.get(ball.face_kind(f), "#fff")))
        shape = ball.spec.faces[ball.face_q[f]].shape
        loc = [complex(*p) for p in polygon(shape)]
        # affine map from local to placed coordinates via the first two corners
        mirror = abs(((pts[1] - pts[0]) / (loc[1] - loc[0])) * (loc[2] - loc[0]) + pts[0] - pts[2]) > 1e-9
        src = [z.conjugate() for z in loc] if mirror else loc
        a = (pts[1] - pts[0]) / (src[1] - src[0])
        fp = sys_.fp.get(w.wall_type, ball.face_q[f])
        for ci in [c for g, c in w.chords if g == f]:
            p, q = fp.chords[ci]
            zs = []
            for anc in (p, q):
                z = complex(*perimeter_point(shape, anchor_pos(anc)))
                z = z.conjugate() if mirror else z
                zs.append(a * (z - src[0]) + pts[0])
            segs.append(((zs[0].real, zs[0].imag), (zs[1].real, zs[1].imag), color))
    return render_svg(polys, segs)


def write_figures(pipe, out_dir: str):
    os.makedirs(out_dir, exist_ok=True)
    sys_ = pipe.walls
    patches = pipe.patches()
    if patches:
        with open(os.path.join(out_dir, "flat_patch.svg"), "w") as fh:
            fh.write(patch_svg(sys_, patches[0]))
    done = set()
    for w in sys_.interior_walls():
        if w.wall_type in done:
            continue
        done.add(w.wall_type)
        with open(os.path.join(out_dir, f"wall_{w.wall_type}.svg"), "w") as fh:
            fh.write(strip_svg(sys_, w))
