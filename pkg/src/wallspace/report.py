"""Pipeline orchestration: run the requested checks and assemble a report."""
from __future__ import annotations

from dataclasses import dataclass, field
import hashlib
import json
import logging
import os
import tempfile
import time
from typing import Dict, List, Optional

from . import __version__
from .complex_core import ComplexSpec, parse_complex_spec, validate_geometry, base_links, quotient_vertices
from .cover import (Ball, CellCapExceeded, DEFAULT_CAP, build_ball, develop_flat_plane, homology_h1,
                    link_at, link_matches_quotient)
from .linkgraph import check_cat0_link, is_fano_incidence, spectrum
from .walls import (WallError, WallSystem, chart_distance, crossing_number, wall_is_simply_connected,
                    wall_plane_intersection, refraction_points)

log = logging.getLogger(__name__)

CHECKS = ("cat0", "links", "spectra", "walls", "separation", "properness", "cubulate")


class ConfigError(ValueError):
    pass


@dataclass
class PipelineConfig:
    spec_path: str
    radius: int = 3
    base: str = "v0"
    checks: List[str] = field(default_factory=lambda: list(CHECKS))
    report_path: Optional[str] = None
    svg_dir: Optional[str] = None
    cap: int = DEFAULT_CAP
    buffer: int = 1
    pair_samples: int = 200

    def validate(self):
        if not isinstance(self.radius, int) or self.radius < 0:
            raise ConfigError("radius must be a non-negative integer")
        if not self.checks:
            raise ConfigError("at least one check is required")
        bad = [c for c in self.checks if c not in CHECKS]
        if bad:
            raise ConfigError(f"unknown checks {bad}; choose from {CHECKS}")
        if self.cap <= 0:
            raise ConfigError("cap must be positive")
        if not os.path.exists(self.spec_path):
            raise ConfigError(f"spec file {self.spec_path} not found")
        for p in (self.report_path,):
            if p:
                d = os.path.dirname(os.path.abspath(p)) or "."
                os.makedirs(d, exist_ok=True)
                if not os.access(d, os.W_OK):
                    raise ConfigError(f"cannot write to {d}")


def _is_acute_corner(spec: ComplexSpec, fi: int, k: int) -> bool:
    face = spec.faces[fi]
    if face.kind == "triangle":
        return True
    return face.shape.corners[k].coef < 0.5


class Pipeline:
    """Lazily built shared state for the checks."""

    def __init__(self, spec: ComplexSpec, cfg: PipelineConfig):
        self.spec = spec
        self.cfg = cfg
        self._ball = None
        self._sys = None
        self._table = None

    @property
    def ball(self) -> Ball:
        if self._ball is None:
            self._ball = build_ball(self.spec, self.cfg.radius, self.cfg.base, self.cfg.cap)
        return self._ball

    @property
    def walls(self) -> WallSystem:
        if self._sys is None:
            big = build_ball(self.spec, self.cfg.radius + self.cfg.buffer, self.cfg.base, self.cfg.cap)
            self._sys = WallSystem(big, self.spec, region_radius=self.cfg.radius)
        return self._sys

    @property
    def table(self):
        if self._table is None:
            from .cubulator import side_table
            self._table = side_table(self.walls)
        return self._table

    # -------------------------------------------------------------- checks
    def check_cat0(self):
        b = self.ball
        interior = [v for v in range(b.n_vertices) if b.vert_complete[v]]
        fails = []
        girths = {}
        for v in interior:
            g = check_cat0_link(link_at(b, v))
            girths[str(g)] = girths.get(str(g), 0) + 1
            if g is not None and g < 2:
                fails.append(v)
        h1 = homology_h1(b)
        return {"pass": not fails and h1 == (0, []), "interior_vertices": len(interior),
                "min_cycle_histogram": dict(sorted(girths.items())), "h1": [h1[0], h1[1]],
                "witness": fails[:10]}

    def check_links(self):
        b = self.ball
        spec = self.spec
        want_fano = bool(spec.metadata.get("fano_links"))
        checked = 0
        fails, mismatch = [], []
        for v in range(b.n_vertices):
            if not b.vert_complete[v]:
                continue
            if not link_matches_quotient(b, v):
                mismatch.append(v)
            if want_fano and any(_is_acute_corner(spec, fi, k) for (fi, k) in b.corners[v]):
                checked += 1
                if not is_fano_incidence(link_at(b, v)):
                    fails.append(v)
        return {"pass": not fails and not mismatch, "fano_required": want_fano,
                "fano_vertices_checked": checked,
                "witness": (fails + mismatch)[:10]}

    def check_spectra(self):
        qv = quotient_vertices(self.spec)
        out = {}
        ok = True
        for v, link in base_links(self.spec).items():
            try:
                rep = spectrum(link)
            except ValueError:
                out[qv.names[v]] = {"connected": False}
                continue
            fano = is_fano_incidence(link)
            entry = {"lambda_1": f"{rep.lambda_1:.12g}", "ramanujan": rep.ramanujan, "fano": fano}
            if fano:
                ok = ok and rep.lambda_1 > 0.5 and rep.ramanujan
            out[qv.names[v]] = entry
        return {"pass": ok, "links": out}

    def check_walls(self):
        s = self.walls
        ball = s.ball
        interior = s.interior_walls()
        by_type: Dict[str, int] = {}
        for w in interior:
            by_type[w.wall_type] = by_type.get(w.wall_type, 0) + 1
        not_sc = [w.id for w in interior if not wall_is_simply_connected(s, w)]
        through: Dict[tuple, int] = {}
        region_cells = ({("face", f) for f in s.region} | {("edge", e) for e in s.region_edges}
                        | {("vertex", v) for v in s.region_vertices})
        for w in s.walls:
            for c in w.carrier() & region_cells:
                through[c] = through.get(c, 0) + 1
        max_through = max(through.values(), default=0)
        over = [list(c) for c, k in through.items() if k > 5]
        tri_trans = [w.id for w in s.walls if w.wall_type == "transverse"
                     and any(ball.face_kind(f) == "triangle" for f in w.carrier_faces)]
        viol, lines = [], 0
        for p in self.patches():
            for w in s.walls:
                if w.wall_type not in ("a", "b", "c"):
                    continue
                try:
                    kind, _ = wall_plane_intersection(s, w, p)
                    lines += kind == "straight_line"
                except WallError:
                    viol.append(w.id)
        refr = {w.id: len(refraction_points(s, w)) for w in interior if w.wall_type in ("a", "b", "c")}
        return {"pass": not not_sc and max_through <= 5 and not tri_trans and not viol,
                "walls": len(s.walls), "interiorly_complete": by_type,
                "not_simply_connected": not_sc, "max_walls_through_cell": max_through,
                "transverse_in_triangle": tri_trans, "flat_patches": len(self.patches()),
                "plane_lines": lines, "plane_violations": viol,
                "refraction_points": sum(refr.values()),
                "witness": (not_sc + viol + tri_trans)[:10] or over[:10]}

    def patches(self):
        if not hasattr(self, "_patches"):
            s = self.walls
            seen, out = set(), []
            for f in sorted(s.region):
                if f in seen or s.ball.face_kind(f) != "triangle":
                    continue
                p = develop_flat_plane(s.ball, f)
                seen.update(p.faces)
                out.append(p)
            self._patches = out
        return self._patches

    def check_separation(self):
        s = self.walls
        counts, halving_bad, bad = {}, [], []
        for w in s.interior_walls():
            c = s.complement(w)
            counts[c.count] = counts.get(c.count, 0) + 1
            if c.count != 2:
                bad.append(w.id)
            halving_bad += [[w.id, x] for x, h in c.halving.items() if h != 2]
        return {"pass": not bad and not halving_bad and bool(counts),
                "component_histogram": {str(k): v for k, v in sorted(counts.items())},
                "halving_violations": halving_bad[:10], "witness": bad[:10]}

    def check_properness(self):
        s = self.walls
        iw = s.interior_walls()
        # flat-plane lower bound on sampled pairs
        pairs = []
        for p in self.patches():
            vs = sorted(v for v in p.coords if v in s.region_vertices)
            pairs += [(p, x, y) for i, x in enumerate(vs) for y in vs[i + 1:]]
        step = max(1, len(pairs) // self.cfg.pair_samples)
        sample = pairs[::step]
        low = []
        for p, x, y in sample:
            d = chart_distance(p, x, y).isqrt_floor_of_square()
            c = crossing_number(s, x, y, iw)
            if c < d:
                low.append([x, y, c, d])
        # trend over 1-skeleton distance
        ball = s.ball
        verts = sorted(s.region_vertices)
        mins, sums, cnt = {}, {}, {}
        for x in verts:
            dist = ball.distances_from(x)
            for y in verts:
                if y > x and dist[y] and dist[y] <= self.cfg.radius:
                    n = dist[y]
                    c = crossing_number(s, x, y, iw)
                    mins[n] = min(mins.get(n, c), c)
                    sums[n] = sums.get(n, 0) + c
                    cnt[n] = cnt.get(n, 0) + 1
        seq = [mins.get(n) for n in range(1, self.cfg.radius + 1)]
        inversions = sum(1 for a, b in zip(seq, seq[1:]) if a is not None and b is not None and b < a)
        return {"pass": not low and inversions == 0 and len(sample) > 0,
                "sampled_pairs": len(sample), "lower_bound_failures": low[:10],
                "min_by_distance": seq,
                "mean_by_distance": [round(sums[n] / cnt[n], 6) if n in cnt else None
                                     for n in range(1, self.cfg.radius + 1)],
                "inversions": inversions}

    def check_cubulate(self):
        from .cubulator import dual_cube_complex
        rep = dual_cube_complex(self.walls, table=self.table)
        expected = self.spec.metadata.get("expected_cube_dimension")
        ok = rep.max_dim == rep.max_crossing_family and rep.facets_ok
        if expected is not None:
            ok = ok and rep.max_dim == expected
        out = rep.to_json()
        out["pass"] = ok
        out["expected"] = expected
        return out


def spec_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def run_pipeline(cfg: PipelineConfig) -> dict:
    """Run checks in dependency order; returns the report (and writes it if asked)."""
    cfg.validate()
    with open(cfg.spec_path, encoding="utf-8") as fh:
        text = fh.read()
    spec = parse_complex_spec(text)
    val = validate_geometry(spec)
    pipe = Pipeline(spec, cfg)
    results, timings = {}, {}
    order = [c for c in CHECKS if c in cfg.checks]
    for name in order:
        t0 = time.perf_counter()
        try:
            results[name] = getattr(pipe, f"check_{name}")()
        except CellCapExceeded as e:
            results[name] = {"pass": False, "error": str(e), "frontier": e.frontier}
        timings[name] = round(time.perf_counter() - t0, 3)
        log.info("check %s: %s (%.2fs)", name, "pass" if results[name]["pass"] else "FAIL", timings[name])
    body = {
        "toolkit_version": __version__,
        "input_hash": spec_hash(text),
        "spec": {"name": spec.metadata.get("name"), "faces": len(spec.faces), "edges": len(spec.edges),
                 "quotient_vertices": val.quotient_vertex_count, "euler_characteristic": val.euler_characteristic,
                 "geometry_ok": val.ok},
        "config": {"radius": cfg.radius, "base": cfg.base, "checks": order, "buffer": cfg.buffer},
        "ball": {"vertices": pipe.ball.n_vertices, "edges": pipe.ball.n_edges, "faces": pipe.ball.n_faces},
        "results": results,
        "pass": all(r["pass"] for r in results.values()),
    }
    body_text = json.dumps(body, sort_keys=True, separators=(",", ":"))
    report = {"body": body, "body_sha256": hashlib.sha256(body_text.encode()).hexdigest(),
              "timings": timings}
    if cfg.svg_dir:
        from .svg import write_figures
        write_figures(pipe, cfg.svg_dir)
    if cfg.report_path:
        write_atomic(cfg.report_path, json.dumps(report, sort_keys=True, indent=1))
    return report


def write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".report-")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    os.replace(tmp, path)
