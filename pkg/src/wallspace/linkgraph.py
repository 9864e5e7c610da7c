"""Link graphs: CAT(0) girth test, Fano recognition, spectra, halving."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import heapq
import math
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .angles import Angle


class LinkGraph:
    """Angle-weighted multigraph of edge germs (nodes) and face corners (edges)."""

    def __init__(self, tag=None):
        self.tag = tag
        self.nodes: List[Hashable] = []
        self._index: Dict[Hashable, int] = {}
        self.edges: List[Tuple[Hashable, Hashable, Angle, Hashable]] = []

    def add_node(self, x):
        if x not in self._index:
            self._index[x] = len(self.nodes)
            self.nodes.append(x)

    def add_edge(self, u, v, weight: Angle, key=None):
        self.add_node(u)
        self.add_node(v)
        if key is None:
            key = len(self.edges)
        self.edges.append((u, v, weight, key))

    def __len__(self):
        return len(self.nodes)

    def edge_keys(self):
        return [e[3] for e in self.edges]

    def simple_adjacency(self) -> List[set]:
        adj = [set() for _ in self.nodes]
        for u, v, _, _ in self.edges:
            i, j = self._index[u], self._index[v]
            if i != j:
                adj[i].add(j)
                adj[j].add(i)
        return adj

    def signature(self):
        """Multiset of (sorted node-pair multiplicity, weight) used for weighted comparisons."""
        return sorted((w.coef for _, _, w, _ in self.edges))


# ------------------------------------------------------------ CAT(0) girth

INFINITY = None  # marker returned for forests


def check_cat0_link(link: LinkGraph) -> Optional[Angle]:
    """Minimal total angle of an embedded cycle, exactly; None for a forest.

    For each corner e = (u, v) the lightest cycle through e is e plus the
    lightest u-v path avoiding e (Dijkstra on the pi-coefficients).
    """
    if not link.edges:
        return INFINITY
    idx = link._index
    n = len(link.nodes)
    inc: List[List[Tuple[int, Fraction, int]]] = [[] for _ in range(n)]
    for k, (u, v, w, _) in enumerate(link.edges):
        inc[idx[u]].append((idx[v], w.coef, k))
        inc[idx[v]].append((idx[u], w.coef, k))
    best: Optional[Fraction] = None
    for k, (u, v, w, _) in enumerate(link.edges):
        s, t = idx[u], idx[v]
        if s == t:
            cand = w.coef
        else:
            bound = None if best is None else best - w.coef
            d = _dijkstra(inc, s, t, k, bound)
            cand = None if d is None else d + w.coef
        if cand is not None and (best is None or cand < best):
            best = cand
    return None if best is None else Angle(best)


def _dijkstra(inc, s, t, skip, bound):
    dist = {s: Fraction(0)}
    heap = [(Fraction(0), s)]
    while heap:
        d, x = heapq.heappop(heap)
        if d > dist.get(x, d):
            continue
        if bound is not None and d >= bound:
            return None
        if x == t:
            return d
        for y, w, k in inc[x]:
            if k == skip:
                continue
            nd = d + w
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return None


def passes_cat0(link: LinkGraph) -> bool:
    g = check_cat0_link(link)
    return g is None or g >= 2


def link_distance(link: LinkGraph, a, b) -> Optional[Fraction]:
    """Weighted link distance between two points given as nodes or (edge_key, t) pairs.

    A point (key, t) lies on corner ``key`` at fraction t of its angle from
    the corner's first node. Returns a pi-coefficient.
    """
    idx = link._index
    n = len(link.nodes)
    inc = [[] for _ in range(n)]
    by_key = {}
    for k, (u, v, w, key) in enumerate(link.edges):
        inc[idx[u]].append((idx[v], w.coef))
        inc[idx[v]].append((idx[u], w.coef))
        by_key[key] = (idx[u], idx[v], w.coef)

    def sources(p):
        if isinstance(p, tuple) and len(p) == 2 and p[0] in by_key and p not in idx:
            u, v, w = by_key[p[0]]
            t = Fraction(p[1])
            return [(u, t * w), (v, (1 - t) * w)], (p[0], t)
        return [(idx[p], Fraction(0))], None

    sa, ea = sources(a)
    sb, eb = sources(b)
    best = None
    if ea is not None and eb is not None and ea[0] == eb[0]:
        best = abs(ea[1] - eb[1]) * by_key[ea[0]][2]
    for s, d0 in sa:
        dist = {s: d0}
        heap = [(d0, s)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist[x]:
                continue
            for y, w in inc[x]:
                if y not in dist or d + w < dist[y]:
                    dist[y] = d + w
                    heapq.heappush(heap, (d + w, y))
        for t, d1 in sb:
            if t in dist:
                c = dist[t] + d1
                if best is None or c < best:
                    best = c
    return best


# ------------------------------------------------------------- Fano plane

def fano_incidence_graph() -> LinkGraph:
    """Point-line incidence graph of PG(2, 2), built from nonzero vectors of F_2^3."""
    pts = [v for v in range(1, 8)]
    # a line is the kernel of a nonzero functional; point x lies on line l iff popcount(x & l) even
    g = LinkGraph(tag="fano")
    third = Angle(1, 3)
    for l in range(1, 8):
        for x in pts:
            if bin(x & l).count("1") % 2 == 0:
                g.add_edge(("pt", x), ("ln", l), third)
    return g


def canonical_form(adj: Sequence[set]) -> Tuple:
    """Canonical adjacency string by individualization and colour refinement.

    Exhaustive over the search tree, so exact; fine for graphs of a few dozen
    nodes such as vertex links.
    """
    n = len(adj)
    if n == 0:
        return (0,)

    def refine(colors):
        while True:
            sig = [(colors[i], tuple(sorted(colors[j] for j in adj[i]))) for i in range(n)]
            ranks = {s: r for r, s in enumerate(sorted(set(sig)))}
            new = [ranks[s] for s in sig]
            if len(set(new)) == len(set(colors)):
                return new
            colors = new

    best = None

    def search(colors):
        nonlocal best
        colors = refine(colors)
        if len(set(colors)) == n:
            perm = sorted(range(n), key=lambda i: colors[i])
            pos = {v: k for k, v in enumerate(perm)}
            code = tuple(sorted((min(pos[i], pos[j]), max(pos[i], pos[j]))
                                for i in range(n) for j in adj[i] if i < j))
            if best is None or code < best:
                best = code
            return
        # split the first smallest non-singleton cell
        cells = {}
        for i, c in enumerate(colors):
            cells.setdefault(c, []).append(i)
        target = min((c for c in cells if len(cells[c]) > 1), key=lambda c: (len(cells[c]), c))
        for v in cells[target]:
            nc = [2 * c for c in colors]
            nc[v] = 2 * target - 1
            search(nc)

    search([len(a) for a in adj])
    return (n,) + best


_FANO_FORM = None


def is_fano_incidence(link: LinkGraph) -> bool:
    global _FANO_FORM
    adj = link.simple_adjacency()
    if len(adj) != 14 or sum(len(a) for a in adj) != 42 or any(len(a) != 3 for a in adj):
        return False
    if _FANO_FORM is None:
        _FANO_FORM = canonical_form(fano_incidence_graph().simple_adjacency())
    return canonical_form(adj) == _FANO_FORM


# ---------------------------------------------------------------- spectra

def jacobi_eigenvalues(m: List[List[float]], tol=1e-12, max_sweeps=100) -> List[float]:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending."""
    a = [list(map(float, row)) for row in m]
    n = len(a)
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[i][j] ** 2 for i in range(n) for j in range(n) if i != j))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if abs(apq) < 1e-300:
                    continue
                theta = (a[q][q] - a[p][p]) / (2 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return sorted(a[i][i] for i in range(n))


@dataclass
class SpectralReport:
    eigenvalues: List[float]
    lambda_1: float
    ramanujan: bool
    degree: Optional[int]
    adjacency_eigenvalues: List[float]

    @property
    def above_half(self) -> bool:
        return self.lambda_1 > 0.5

    def to_json(self):
        return {
            "eigenvalues": [f"{x:.12g}" for x in self.eigenvalues],
            "lambda_1": f"{self.lambda_1:.12g}",
            "ramanujan": self.ramanujan,
            "degree": self.degree,
        }


def _components(adj) -> int:
    seen = set()
    count = 0
    for s in range(len(adj)):
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def spectrum(link: LinkGraph) -> SpectralReport:
    adj = link.simple_adjacency()
    n = len(adj)
    if n == 0 or _components(adj) != 1:
        raise ValueError("spectrum needs a connected nonempty graph")
    deg = [len(a) for a in adj]
    lap = [[0.0] * n for _ in range(n)]
    A = [[0.0] * n for _ in range(n)]
    for i in range(n):
        lap[i][i] = 1.0 if deg[i] else 0.0
        for j in adj[i]:
            lap[i][j] = -1.0 / math.sqrt(deg[i] * deg[j])
            A[i][j] = 1.0
    ev = jacobi_eigenvalues(lap)
    ev = [0.0 if abs(x) < 1e-12 else x for x in ev]
    aev = jacobi_eigenvalues(A)
    regular = len(set(deg)) == 1
    d = deg[0] if regular else None
    ram = False
    if regular:
        bound = 2 * math.sqrt(d - 1)
        nontrivial = [m for m in aev if abs(abs(m) - d) > 1e-9]
        ram = all(abs(m) <= bound + 1e-9 for m in nontrivial)
    lam1 = ev[1] if n > 1 else 0.0
    return SpectralReport(ev, lam1, ram, d, aev)


# ---------------------------------------------------------------- halving

def halving_components(link: LinkGraph, trace) -> int:
    """Components of the link with the wall trace removed.

    ``trace`` may hold node names, edge keys (whole corners), and points
    ``("pt", edge_key, t)`` with 0 < t < 1 cutting a corner in its interior.
    """
    keys = {e[3]: e for e in link.edges}
    nodes_cut, edges_cut, cuts = set(), set(), {}
    for item in trace:
        if isinstance(item, tuple) and len(item) == 3 and item[0] == "pt":
            _, key, t = item
            if key not in keys or not 0 < t < 1:
                raise ValueError(f"trace point {item!r} not on the link")
            cuts.setdefault(key, set()).add(Fraction(t))
        elif item in keys:
            edges_cut.add(item)
        elif item in link._index:
            nodes_cut.add(item)
        else:
            raise ValueError(f"trace element {item!r} not in the link")
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    for x in link.nodes:
        if x not in nodes_cut:
            find(("n", x))
    for u, v, _, key in link.edges:
        if key in edges_cut:
            continue
        pieces = len(cuts.get(key, ())) + 1
        for k in range(pieces):
            find(("e", key, k))
        if u not in nodes_cut:
            union(("e", key, 0), ("n", u))
        if v not in nodes_cut:
            union(("e", key, pieces - 1), ("n", v))
    return len({find(x) for x in list(parent)})
