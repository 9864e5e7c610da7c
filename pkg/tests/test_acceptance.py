"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
from collections import Counter
from fractions import Fraction
from itertools import combinations
import math
import os
import sys
import time

import networkx as nx
import numpy as np
import pytest
import sympy

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from conftest import ACCEPTANCE_LINES, fixture_path  # noqa: E402
from wallspace.complex_core import load_spec, validate_geometry  # noqa: E402
from wallspace.cover import build_ball, develop_flat_plane, link_at  # noqa: E402
from wallspace.cubulator import crossing_graph, dual_cube_complex, max_crossing_family, side_table  # noqa: E402
from wallspace.linkgraph import check_cat0_link, fano_incidence_graph, is_fano_incidence, spectrum  # noqa: E402
from wallspace.walls import (ball_point, complement_components, crossing_number, wall_homology,  # noqa: E402
                             wall_plane_intersection, wall_system, chart_distance)

V_BOWTIE = fixture_path("v_bowtie.complex")
TORUS = fixture_path("flat_torus.complex")


def record(n, ok, detail, elapsed, budget):
    ok = ok and elapsed < budget
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}  ({elapsed:.1f}s / {budget}s)"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return ok


# -------------------------------------------------------------- shared state

@pytest.fixture(scope="module")
def vspec():
    return load_spec(V_BOWTIE)


@pytest.fixture(scope="module")
def vball(vspec):
    return build_ball(vspec, 3)


@pytest.fixture(scope="module")
def vsys(vspec):
    t = time.perf_counter()
    s = wall_system(vspec, 3)
    s.build_seconds = time.perf_counter() - t
    return s


@pytest.fixture(scope="module")
def tspec():
    return load_spec(TORUS)


def nx_link(link):
    g = nx.MultiGraph()
    for u, v, w, k in link.edges:
        g.add_edge(u, v, key=k, weight=w.coef)
    return g


def nx_girth(g):
    """Least weight cycle: each edge plus the shortest path avoiding it."""
    best = None
    for u, v, k, d in g.edges(keys=True, data=True):
        h = g.copy()
        h.remove_edge(u, v, key=k)
        try:
            rest = nx.dijkstra_path_length(h, u, v, weight=lambda a, b, e: min(x["weight"] for x in e.values()))
        except nx.NetworkXNoPath:
            continue
        c = d["weight"] + rest
        best = c if best is None else min(best, c)
    return best


def simple_nx(link):
    g = nx.Graph()
    g.add_edges_from((u, v) for u, v, _, _ in link.edges)
    return g


def is_acute(spec, fi, k):
    f = spec.faces[fi]
    return f.kind == "triangle" or f.shape.corners[k].coef < Fraction(1, 2)


# ----------------------------------------------------------------- criteria

def test_criterion_1_fixture_integrity():
    t = time.perf_counter()
    spec = load_spec(V_BOWTIE)
    kinds = Counter(f.kind for f in spec.faces)
    rep = validate_geometry(spec)
    ok = len(spec.faces) == 13 and kinds == {"triangle": 4, "rhombus": 3, "bowtie": 6} and rep.ok
    assert record(1, ok, f"faces={len(spec.faces)} kinds={dict(kinds)}", time.perf_counter() - t, 1)


def test_criterion_2_cat0_links(vball):
    t = time.perf_counter()
    interior = [v for v in range(vball.n_vertices) if vball.vert_complete[v]]
    bad = 0
    for v in interior:
        link = link_at(vball, v)
        g = check_cat0_link(link)
        oracle = nx_girth(nx_link(link))
        if g is None or g.coef != oracle or g < 2:
            bad += 1
    ok = bad == 0 and len(interior) > 0
    assert record(2, ok, f"interior vertices={len(interior)} failures={bad}", time.perf_counter() - t, 60)


def test_criterion_3_fano_links(vspec, vball):
    t = time.perf_counter()
    heawood = nx.heawood_graph()
    checked = bad = 0
    kinds = Counter()
    for v in range(vball.n_vertices):
        if not vball.vert_complete[v]:
            continue
        acute = [(fi, k) for (fi, k) in vball.corners[v] if is_acute(vspec, fi, k)]
        if not acute:
            continue
        checked += 1
        kinds.update({vspec.faces[fi].kind for fi, _ in acute})
        link = link_at(vball, v)
        if not (is_fano_incidence(link) and nx.is_isomorphic(simple_nx(link), heawood)):
            bad += 1
    ok = bad == 0 and set(kinds) == {"triangle", "rhombus", "bowtie"}
    assert record(3, ok, f"vertices={checked} failures={bad}", time.perf_counter() - t, 60)


def test_criterion_4_spectra():
    t = time.perf_counter()
    rep = spectrum(fano_incidence_graph())
    target = 1 - math.sqrt(2) / 3
    # dense numpy oracle
    a = nx.to_numpy_array(nx.heawood_graph())
    lap = np.eye(14) - a / 3
    np_l1 = np.sort(np.linalg.eigvalsh(lap))[1]
    # exact characteristic polynomial of the adjacency matrix
    x = sympy.symbols("x")
    cp = sympy.Matrix(a.astype(int)).charpoly(x).as_expr()
    roots = sympy.roots(sympy.Poly(cp, x))
    mu2 = max(r for r in roots if r != 3)
    exact_l1 = 1 - mu2 / 3
    nontrivial = [m for m in rep.adjacency_eigenvalues if abs(abs(m) - 3) > 1e-9]
    ok = (abs(rep.lambda_1 - target) < 1e-9 and abs(np_l1 - target) < 1e-9
          and sympy.simplify(exact_l1 - (1 - sympy.sqrt(2) / 3)) == 0
          and rep.lambda_1 > 0.5 and rep.ramanujan
          and all(abs(abs(m) - math.sqrt(2)) < 1e-9 for m in nontrivial))
    assert record(4, ok, f"lambda_1={rep.lambda_1:.12f} ramanujan={rep.ramanujan}", time.perf_counter() - t, 1)


def test_criterion_5_walls_two_sided(vsys):
    t = time.perf_counter()
    interior = vsys.interior_walls()
    types = Counter(w.wall_type for w in interior)
    bad = []
    for w in interior:
        h1 = wall_homology(vsys, w)
        comps = complement_components(vsys, w)
        # oracle for H1: connected 1-skeleton and Euler characteristic 1
        g = nx.Graph()
        g.add_nodes_from(w.points)
        ball = vsys.ball
        for f, ci in w.chords:
            p, q = vsys.fp.get(w.wall_type, ball.face_q[f]).chords[ci]
            g.add_edge(ball_point(ball, f, p), ball_point(ball, f, q))
        n_edge_pieces = 0
        for e in w.wall_edges:
            inner = sorted(p for p in w.points if p[0] == "e" and p[1] == e)
            chain = [("v", ball.edge_ends[e][0])] + inner + [("v", ball.edge_ends[e][1])]
            g.add_edges_from(zip(chain, chain[1:]))
            n_edge_pieces += len(chain) - 1
        chi = len(w.points) - (len(w.chords) + n_edge_pieces) + len(w.fat_faces)
        if h1 != (0, []) or comps != 2 or not nx.is_connected(g) or chi != 1:
            bad.append(w.id)
    ok = not bad and set(types) == {"a", "b", "c", "d", "transverse"}
    elapsed = time.perf_counter() - t + vsys.build_seconds
    assert record(5, ok, f"interior walls={len(interior)} by type={dict(sorted(types.items()))} "
                         f"failures={len(bad)}", elapsed, 300)


def test_criterion_6_finiteness(vsys):
    t = time.perf_counter()
    count = Counter()
    for w in vsys.walls:
        for c in w.carrier():
            count[c] += 1
    ball = vsys.ball
    cells = ([("vertex", v) for v in range(ball.n_vertices)] + [("edge", e) for e in range(ball.n_edges)]
             + [("face", f) for f in range(ball.n_faces)])
    worst = max(count[c] for c in cells)
    trans_tri = sum(1 for w in vsys.walls if w.wall_type == "transverse"
                    for f in w.carrier_faces if ball.face_kind(f) == "triangle")
    ok = worst <= 5 and trans_tri == 0
    assert record(6, ok, f"cells={len(cells)} max walls through a cell={worst}", time.perf_counter() - t, 60)


def test_criterion_7_flat_planes(vsys):
    t = time.perf_counter()
    ball = vsys.ball
    seen, patches = set(), []
    for f in sorted(vsys.region):
        if f not in seen and ball.face_kind(f) == "triangle":
            p = develop_flat_plane(ball, f)
            seen.update(p.faces)
            patches.append(p)
    kinds, violations = Counter(), 0
    for p in patches:
        for w in vsys.walls:
            if w.wall_type in ("a", "b", "c"):
                try:
                    kinds[wall_plane_intersection(vsys, w, p)[0]] += 1
                except ValueError:
                    violations += 1
    iw = vsys.interior_walls()
    pairs = []
    for p in patches:
        vs = sorted(v for v in p.coords if v in vsys.region_vertices)
        pairs += [(p, x, y) for x, y in combinations(vs, 2)]
    low = 0
    for p, x, y in pairs:
        d = chart_distance(p, x, y)
        fl = d.isqrt_floor_of_square()
        (i1, j1), (i2, j2) = p.coords[x], p.coords[y]
        di, dj = i1 - i2, j1 - j2
        assert fl == math.isqrt(di * di + di * dj + dj * dj)
        if crossing_number(vsys, x, y, iw) < fl:
            low += 1
    ok = violations == 0 and set(kinds) <= {"empty", "straight_line"} and len(pairs) >= 100 and low == 0
    assert record(7, ok, f"patches={len(patches)} intersections={dict(kinds)} violations={violations} "
                         f"pairs={len(pairs)} below bound={low}", time.perf_counter() - t, 300)


def test_criterion_8_cubulation(vsys):
    t = time.perf_counter()
    table = side_table(vsys)
    g = crossing_graph(vsys, table=table)
    k, witness = max_crossing_family(g)
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    nx_k = max(len(c) for c in nx.find_cliques(h))
    rep = dual_cube_complex(vsys, table=table)
    chi = sum((-1) ** d * c for d, c in enumerate(rep.cubes))
    types = sorted(w.wall_type for w in witness)
    ok = (k == 4 == nx_k and types == ["a", "b", "c", "transverse"] and rep.max_dim == 4
          and rep.facets_ok and chi == 1)
    assert record(8, ok, f"max crossing family={k} witness types={types} cubes={rep.cubes}",
                  time.perf_counter() - t, 300)


def test_criterion_9_flat_torus_oracle(tspec):
    t = time.perf_counter()
    r = 3
    ball = build_ball(tspec, r)
    counts_ok = (ball.n_vertices, ball.n_edges, ball.n_faces) == (3 * r * r + 3 * r + 1, 9 * r * r + 3 * r, 6 * r * r)
    sys_ = wall_system(tspec, r)
    comps_ok = all(complement_components(sys_, w) == 2 for w in sys_.interior_walls())
    patch = develop_flat_plane(sys_.ball, min(sys_.region))
    heights = {}
    for lab in ("a", "b"):
        e = sys_.ball.edge_label.index(lab)
        tl, hd = sys_.ball.edge_ends[e]
        heights[lab] = (patch.coords[hd][0] - patch.coords[tl][0], patch.coords[hd][1] - patch.coords[tl][1])

    def analytic(x, y):
        n = 0
        for ui, uj in heights.values():
            hx = ui * patch.coords[x][1] - uj * patch.coords[x][0]
            hy = ui * patch.coords[y][1] - uj * patch.coords[y][0]
            n += abs(hx - hy)
        return n

    verts = sorted(sys_.region_vertices)
    mismatches = sum(1 for x, y in combinations(verts, 2) if crossing_number(sys_, x, y) != analytic(x, y))
    cg = crossing_graph(sys_)
    a = [i for i, w in enumerate(cg.walls) if w.wall_type == "a"]
    b = [i for i, w in enumerate(cg.walls) if w.wall_type == "b"]
    p = q = 3
    grid = None
    for A in combinations(a, p):
        common = sorted(set.intersection(*(cg.adj[i] for i in A)) & set(b))
        if len(common) >= q:
            grid = [cg.walls[i] for i in A] + [cg.walls[i] for i in common[:q]]
            break
    grid_ok = grid is not None and dual_cube_complex(sys_, walls=grid).cubes == [
        (p + 1) * (q + 1), p * (q + 1) + q * (p + 1), p * q]
    ok = counts_ok and comps_ok and mismatches == 0 and grid_ok
    assert record(9, ok, f"ball={ball.n_vertices}/{ball.n_edges}/{ball.n_faces} pairs={len(verts) * (len(verts) - 1) // 2} "
                         f"mismatches={mismatches} grid 0-cubes={(p + 1) * (q + 1) if grid_ok else None}",
                  time.perf_counter() - t, 30)


def _min_by_distance(sys_, radius):
    g = nx.Graph(list(sys_.ball.edge_ends))
    iw = sys_.interior_walls()
    verts = sorted(sys_.region_vertices)
    mins = {}
    for x in verts:
        dist = nx.single_source_shortest_path_length(g, x, cutoff=radius)
        for y in verts:
            n = dist.get(y)
            if y > x and n:
                c = crossing_number(sys_, x, y, iw)
                mins[n] = min(mins.get(n, c), c)
    return [mins.get(n) for n in range(1, radius + 1)]


def test_criterion_10_properness_trend(vsys, tspec):
    t = time.perf_counter()
    seqs = {"flat_torus": _min_by_distance(wall_system(tspec, 3), 3), "v_bowtie": _min_by_distance(vsys, 3)}
    inversions = sum(1 for s in seqs.values() for u, v in zip(s, s[1:]) if v < u)
    ok = inversions == 0 and all(None not in s for s in seqs.values())
    assert record(10, ok, f"min crossing by distance {seqs} inversions={inversions}", time.perf_counter() - t, 300)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
