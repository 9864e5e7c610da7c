from itertools import combinations, product

from hypothesis import given, settings, strategies as st
import networkx as nx
import pytest

from wallspace.cubulator import (all_max_cliques, crossing_graph, dual_cube_complex, lex_least_clique,
                                 max_clique_size, side_table)


def adj_of(g, n):
    return [set(g.neighbors(i)) for i in range(n)]


graphs = st.tuples(st.integers(4, 14), st.floats(0.1, 0.9), st.integers(0, 10_000))


@settings(max_examples=60, deadline=None)
@given(graphs)
def test_max_clique_matches_networkx(args):
    n, p, seed = args
    g = nx.gnp_random_graph(n, p, seed=seed)
    adj = adj_of(g, n)
    k = max(len(c) for c in nx.find_cliques(g))
    assert max_clique_size(adj) == k
    ours = {tuple(sorted(c)) for c in all_max_cliques(adj, k)}
    ref = {tuple(sorted(c)) for c in nx.find_cliques(g) if len(c) == k}
    assert ours == ref
    lex = lex_least_clique(adj, k)
    assert tuple(lex) == min(ref)


def brute_orientations(table):
    n = len(table.walls)
    atoms = range(len(table.atoms))

    def ok(sig):
        for i, j in combinations(range(n), 2):
            if not any(table.sides[i][a] == sig[i] and table.sides[j][a] == sig[j] for a in atoms):
                return False
        return True

    return {sig for sig in product((0, 1), repeat=n) if ok(sig)}


def brute_cubes(table, S, dmax):
    n = len(table.walls)
    counts = [len(S)]
    for d in range(1, dmax + 1):
        c = 0
        for W in combinations(range(n), d):
            for sig in S:
                if any(sig[i] for i in W):
                    continue
                flips = product((0, 1), repeat=d)
                if all(tuple(f[W.index(i)] if i in W else sig[i] for i in range(n)) in S for f in flips):
                    c += 1
        counts.append(c)
    return counts


def test_flat_torus_cube_complex_brute_force(tsys):
    table = side_table(tsys)
    rep = dual_cube_complex(tsys, table=table)
    S = brute_orientations(table)
    assert rep.cubes == brute_cubes(table, S, rep.max_dim)
    assert rep.max_dim == 2 == rep.max_crossing_family
    assert sum((-1) ** d * c for d, c in enumerate(rep.cubes)) == 1


@pytest.mark.parametrize("p, q", [(1, 1), (2, 3), (3, 3)])
def test_grid(tsys, p, q):
    g = crossing_graph(tsys)
    ws = g.walls
    a = [i for i, w in enumerate(ws) if w.wall_type == "a"]
    b = [i for i, w in enumerate(ws) if w.wall_type == "b"]
    # greedy: a-walls whose crossing sets share at least q b-walls
    for A in combinations(a, p):
        common = set.intersection(*(g.adj[i] for i in A)) & set(b)
        if len(common) >= q:
            B = sorted(common)[:q]
            break
    else:
        pytest.fail("no grid found")
    walls = [ws[i] for i in A + tuple(B)]
    rep = dual_cube_complex(tsys, walls=walls)
    assert rep.cubes == [(p + 1) * (q + 1), p * (q + 1) + q * (p + 1), p * q]


def test_crossing_graph_types(tsys):
    g = crossing_graph(tsys)
    for i, j in g.edges():
        assert g.walls[i].wall_type != g.walls[j].wall_type
