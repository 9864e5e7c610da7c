"""Integer Smith normal form for sparse boundary matrices, and homology."""
from __future__ import annotations

from typing import Dict, List, Sequence, Tuple


def _dense_snf_diag(rows: List[List[int]]) -> List[int]:
    """Nonzero invariant factors of a small dense integer matrix."""
    a = [r[:] for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    diag = []
    t = 0
    while t < m and t < n:
        # pick the nonzero entry of least absolute value in the trailing block
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                if a[t][j]:
                    done = False
            if done:
                # divisibility of the trailing block
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                            if a[i][j] % p), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest remaining entry of row/col t into the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, n):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for r in a:
                    r[t], r[j] = r[j], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def smith_invariants(entries: Dict[Tuple[int, int], int], nrows: int, ncols: int) -> List[int]:
    """Nonzero invariant factors of a sparse integer matrix {(i, j): value}.

    Unit pivots are eliminated sparsely first (boundary matrices are mostly
    +-1), and the leftover block goes through the dense algorithm.
    """
    rows: Dict[int, Dict[int, int]] = {}
    cols: Dict[int, set] = {}
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        piv = None
        best = None
        for i in sorted(rows, key=lambda r: len(rows[r])):
            for j, v in rows[i].items():
                if v in (1, -1):
                    cost = (len(rows[i]) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best:
                        best, piv = cost, (i, j)
                        if cost == 0:
                            break
            if best == 0 or (best is not None and len(rows[i]) > 3):
                break
        if piv is None:
            break
        i, j = piv
        prow = rows.pop(i)
        u = prow[j]
        for r in list(cols[j]):
            if r == i:
                continue
            row = rows[r]
            f = row[j] * u  # u = +-1 so u^-1 = u
            for c, x in prow.items():
                nv = row.get(c, 0) - f * x
                if nv:
                    if c not in row:
                        cols[c].add(r)
                    row[c] = nv
                else:
                    if c in row:
                        del row[c]
                        cols[c].discard(r)
            if not row:
                del rows[r]
        for c in prow:
            cols[c].discard(i)
            if not cols[c]:
                del cols[c]
        cols.pop(j, None)
        for r in list(rows):
            rows[r].pop(j, None)
            if not rows[r]:
                del rows[r]
        units += 1
    rest = []
    if rows:
        ri = sorted(rows)
        ci = sorted({c for r in rows.values() for c in r})
        pos = {c: k for k, c in enumerate(ci)}
        dense = [[0] * len(ci) for _ in ri]
        for k, r in enumerate(ri):
            for c, v in rows[r].items():
                dense[k][pos[c]] = v
        rest = _dense_snf_diag(dense)
    return [1] * units + sorted(rest)


def homology(n0: int, d1: Dict[Tuple[int, int], int], n1: int,
             d2: Dict[Tuple[int, int], int], n2: int) -> Tuple[int, List[int]]:
    """(betti_1, torsion) of a chain complex with boundary maps given sparsely.

    ``d1`` maps (vertex, edge) -> coefficient, ``d2`` maps (edge, face) -> coefficient.
    """
    r1 = len(smith_invariants(d1, n0, n1)) if n1 else 0
    inv2 = smith_invariants(d2, n1, n2) if n2 else []
    betti = (n1 - r1) - len(inv2)
    torsion = sorted(x for x in inv2 if x > 1)
    return betti, torsion
