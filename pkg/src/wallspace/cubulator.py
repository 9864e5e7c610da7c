"""Crossing graph of walls, exact maximum crossing families, dual cube complex."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .walls import Wall, WallSystem


@dataclass
class SideTable:
    """Side (0 or 1) of every region atom with respect to every two-sided wall."""

    walls: List[Wall]
    atoms: List[Tuple[int, int]]
    sides: List[List[Optional[int]]]   # sides[i][a]


def side_table(sys_: WallSystem, walls: Optional[Sequence[Wall]] = None) -> SideTable:
    walls = [w for w in (walls if walls is not None else sys_.interior_walls())
             if sys_.complement(w).count == 2]
    atoms = sys_.atoms()
    rows = []
    for w in walls:
        c = sys_.complement(w)
        raw = [c.side_of_atom(f, i) for f, i in atoms]
        labels = sorted({x for x in raw if x is not None})
        # only classes meeting the region appear on atoms; relabel them 0/1
        rows.append([None if x is None else labels.index(x) for x in raw])
    return SideTable(walls, atoms, rows)


@dataclass
class CrossingGraph:
    walls: List[Wall]
    adj: List[Set[int]]

    @property
    def n(self):
        return len(self.walls)

    def edges(self):
        return [(i, j) for i in range(self.n) for j in self.adj[i] if i < j]


def _inhabited(table: SideTable, i: int, j: int) -> Set[Tuple[int, int]]:
    a, b = table.sides[i], table.sides[j]
    return {(x, y) for x, y in zip(a, b) if x is not None and y is not None}


def crossing_graph(sys_: WallSystem, walls: Optional[Sequence[Wall]] = None,
                   table: Optional[SideTable] = None) -> CrossingGraph:
    """Walls cross iff all four side pairs contain a region atom."""
    table = table or side_table(sys_, walls)
    n = len(table.walls)
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if len(_inhabited(table, i, j)) == 4:
                adj[i].add(j)
                adj[j].add(i)
    return CrossingGraph(table.walls, adj)


# ------------------------------------------------------------ max clique

def _color_bound(cands: List[int], adj: List[Set[int]]):
    """Greedy sequential colouring; returns candidates ordered by colour and colour numbers."""
    colors = []
    order, bounds = [], []
    for v in cands:
        for k, cls in enumerate(colors):
            if not (adj[v] & cls):
                cls.add(v)
                break
        else:
            colors.append({v})
    for k, cls in enumerate(colors, start=1):
        for v in sorted(cls):
            order.append(v)
            bounds.append(k)
    return order, bounds


def max_clique_size(adj: List[Set[int]]) -> int:
    best = 0

    def expand(size, cands):
        nonlocal best
        order, bounds = _color_bound(cands, adj)
        for idx in range(len(order) - 1, -1, -1):
            if size + bounds[idx] <= best:
                return
            v = order[idx]
            new = [u for u in order[:idx] if u in adj[v]]
            if new:
                expand(size + 1, new)
            elif size + 1 > best:
                best = size + 1

    n = len(adj)
    if n:
        expand(0, list(range(n)))
    return best


def lex_least_clique(adj: List[Set[int]], k: int) -> Optional[List[int]]:
    """Lexicographically least k-clique (vertices in increasing order)."""
    def rec(chosen, cands):
        if len(chosen) == k:
            return chosen
        if len(chosen) + len(cands) < k:
            return None
        order, bounds = _color_bound(cands, adj)
        if len(chosen) + (max(bounds) if bounds else 0) < k:
            return None
        for idx, v in enumerate(cands):
            r = rec(chosen + [v], [u for u in cands[idx + 1:] if u in adj[v]])
            if r:
                return r
        return None

    return rec([], list(range(len(adj))))


def max_crossing_family(g: CrossingGraph) -> Tuple[int, List[Wall]]:
    size = max_clique_size(g.adj)
    if size == 0:
        return 0, []
    wit = lex_least_clique(g.adj, size)
    return size, [g.walls[i] for i in wit]


def all_max_cliques(adj: List[Set[int]], k: int) -> List[List[int]]:
    out = []

    def rec(chosen, cands):
        if len(chosen) == k:
            out.append(chosen)
            return
        if len(chosen) + len(cands) < k:
            return
        for idx, v in enumerate(cands):
            rec(chosen + [v], [u for u in cands[idx + 1:] if u in adj[v]])

    rec([], list(range(len(adj))))
    return out


# -------------------------------------------------------- dual complex

@dataclass
class CubeReport:
    cubes: List[int]
    max_crossing_family: int
    witness: List[int]
    witness_types: List[str] = field(default_factory=list)
    facets_ok: bool = True

    @property
    def max_dim(self) -> int:
        return len(self.cubes) - 1

    def to_json(self):
        return {"cubes": self.cubes, "max_dim": self.max_dim, "witness": self.witness,
                "witness_types": self.witness_types, "max_crossing_family": self.max_crossing_family,
                "facets_ok": self.facets_ok}


class CubeLimit(RuntimeError):
    pass


def dual_cube_complex(sys_: WallSystem, walls: Optional[Sequence[Wall]] = None,
                      table: Optional[SideTable] = None, vertex_cap: int = 2_000_000,
                      check_facets: bool = True) -> CubeReport:
    """Principal part of the dual cube complex of the restricted wall system.

    0-cubes are orientations choosing one side per wall with every pair of
    chosen sides sharing a region atom; they are reached from the orientation
    of one atom by single consistent flips. A d-cube is a 0-cube together
    with d pairwise crossing walls, all on side 0 there and each flippable.
    """
    table = table or side_table(sys_, walls)
    n = len(table.walls)
    for i, row in enumerate(table.sides):
        if len({x for x in row if x is not None}) != 2:
            raise ValueError(f"wall {table.walls[i].id} does not have two sides")
    # allowed[i][s]: bitmask of literals (j, t) compatible with choosing side s of wall i
    allowed = [[0, 0] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for s, t in _inhabited(table, i, j):
                allowed[i][s] |= 1 << (2 * j + t)
    for i in range(n):
        for s in (0, 1):
            allowed[i][s] |= 3 << (2 * i)
    g = crossing_graph(sys_, table=table)

    start = next(a for a in range(len(table.atoms))
                 if all(table.sides[i][a] is not None for i in range(n)))
    sigma0 = 0
    for i in range(n):
        sigma0 |= 1 << (2 * i + table.sides[i][start])

    def flippable(sig, i):
        s = (sig >> (2 * i + 1)) & 1  # current side
        new = 1 - s
        rest = sig & ~(3 << (2 * i))
        return (rest & ~allowed[i][new]) == 0

    seen = {sigma0}
    dq = deque([sigma0])
    while dq:
        sig = dq.popleft()
        for i in range(n):
            if flippable(sig, i):
                nsig = sig ^ (3 << (2 * i))
                if nsig not in seen:
                    if len(seen) >= vertex_cap:
                        raise CubeLimit(f"more than {vertex_cap} 0-cubes")
                    seen.add(nsig)
                    dq.append(nsig)
    counts = [len(seen)]
    cube_sets: Dict[int, Set[Tuple[int, Tuple[int, ...]]]] = {}
    for sig in seen:
        up = [i for i in range(n) if not (sig >> (2 * i + 1)) & 1 and flippable(sig, i)]
        # cliques of the crossing graph inside `up`
        stack = [((), up)]
        while stack:
            chosen, cands = stack.pop()
            for idx, v in enumerate(cands):
                c = chosen + (v,)
                d = len(c)
                while len(counts) <= d:
                    counts.append(0)
                counts[d] += 1
                if check_facets and d <= 4:
                    cube_sets.setdefault(d, set()).add((sig, c))
                nxt = [u for u in cands[idx + 1:] if u in g.adj[v]]
                if nxt:
                    stack.append((c, nxt))
    facets_ok = True
    if check_facets:
        for d, cubes in cube_sets.items():
            if d < 2:
                continue
            lower = cube_sets.get(d - 1, set())
            for sig, c in cubes:
                for k, i in enumerate(c):
                    rest = tuple(x for x in c if x != i)
                    if (sig, rest) not in lower or (sig ^ (3 << (2 * i)), rest) not in lower:
                        facets_ok = False
                        break
    size, wit = max_crossing_family(g)
    return CubeReport(counts, size, [w.id for w in wit], [w.wall_type for w in wit], facets_ok)
