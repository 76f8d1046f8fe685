"""Hand-embedded classification fixture, independent of the library's block logic.

Subgroups are written as block shapes and realized directly as root sets.
Every subgroup here has maximal rank, so containment up to conjugacy is
containment of root systems up to the Weyl group, decided by brute-force
orbits.  Finiteness passes to overgroups, infiniteness to subgroups.
"""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import combinations

from doublecosets.rootsys import build_root_system


def _parts(total, lows):
    """Nondecreasing tuples (one per bound) with entries >= bounds, summing to total."""
    if not lows:
        if total == 0:
            yield ()
        return
    lo = lows[0]
    for a in range(lo, total + 1):
        for rest in _parts(total - a, lows[1:]):
            yield (a,) + rest


def block_roots(fam, n, shape, flip_last=False):
    """Root set of a block shape [(kind, size), ...] on consecutive coordinates."""
    m = n + 1 if fam == "A" else n
    roots = set()
    start = 0
    for kind, size in shape:
        S = list(range(start, start + size))
        start += size
        for i, j in combinations(S, 2):
            for a, b in ((i, j), (j, i)):
                v = [0] * m
                v[a], v[b] = 1, -1
                roots.add(tuple(v))
            if kind in "BCD":
                for s in (1, -1):
                    v = [0] * m
                    v[i], v[j] = s, s
                    roots.add(tuple(v))
        if kind in "BC":
            for i in S:
                for s in (1, -1):
                    v = [0] * m
                    v[i] = s * (2 if kind == "C" else 1)
                    roots.add(tuple(v))
    assert start <= m, (fam, n, shape)
    if flip_last:
        roots = {r[:-1] + (-r[-1],) for r in roots}
    return frozenset(roots)


def variants(fam, n, shape):
    """Root sets for a shape; both classes in type D when the shape allows two."""
    shape = sorted(shape, key=lambda b: b[0] == "GL")
    out = {block_roots(fam, n, shape)}
    if fam == "D":
        out.add(block_roots(fam, n, shape, flip_last=True))
    return out


@lru_cache(maxsize=None)
def orbit(fam, n, roots):
    G = build_root_system(fam, n)
    seen = {roots}
    queue = deque([roots])
    while queue:
        cur = queue.popleft()
        for a in G.simple:
            img = frozenset(G.reflect(a, r) for r in cur)
            if img not in seen:
                seen.add(img)
                queue.append(img)
    return tuple(seen)


def conj_contained(fam, n, small, big):
    return any(o <= big for o in orbit(fam, n, small))


def conj_equal(fam, n, a, b):
    return len(a) == len(b) and b in orbit(fam, n, a)


# -- fixture rows: (shapes, parabolic nodes or None for all) -----------------------


def table1(fam, n):
    rows = []
    if fam == "A":
        rows += [[("GL", a), ("GL", b)] for a, b in _parts(n + 1, (1, 1))]
        rows.append([("GL", n + 1)])
    elif fam == "B":
        rows += [[("B", a), ("D", b)] for a in range(0, n) for b in [n - a]]
        rows += [[("B", n)], [("GL", n)]]
    elif fam == "C":
        rows += [[("C", a), ("C", b)] for a, b in _parts(n, (1, 1))]
        rows += [[("C", n)], [("C", n - 1), ("GL", 1)], [("GL", n)]]
    else:
        rows += [[("D", a), ("D", b)] for a, b in _parts(n, (1, 1))]
        rows += [[("D", n)], [("GL", n)]]
    return rows


def spherical_levi_nodes(fam, n):
    return {"A": set(range(1, n + 1)), "B": {1, n}, "C": {1, n}, "D": {1, n - 1, n}}[fam]


def finite_rows(fam, n):
    rows = [(s, None) for s in table1(fam, n)]
    ends = {1, n}
    if fam == "A":
        rows.append(([("GL", 1)] * (n + 1), ends))
        rows += [([("GL", a), ("GL", b), ("GL", c)], None) for a, b, c in _parts(n + 1, (1, 1, 1))]
    elif fam == "B":
        rows += [([("GL", a), ("B", n - a)], ends) for a in range(1, n + 1)]
    elif fam == "C":
        rows.append(([("C", 1)] * n, {1}))
        rows += [([("GL", a)] + [("C", 1)] * (n - a), {1}) for a in range(1, n + 1)]
        rows += [([("C", a), ("C", b), ("C", c)], {n}) for a, b, c in _parts(n, (1, 1, 1))]
        rows += [([("C", a), ("C", b), ("GL", 1)], {n}) for a, b in _parts(n - 1, (1, 1))]
        rows += [([("GL", a), ("C", n - a)], {n}) for a in range(1, n)]
    else:
        rows += [([("GL", a), ("D", n - a)], {1}) for a in range(1, n)]
        rows += [([("GL", a), ("GL", b)], {1}) for a, b in _parts(n, (1, 1))]
        top = {n - 1, n}
        rows += [([("D", a), ("D", b), ("D", c)], top) for a, b, c in _parts(n, (1, 1, 1))]
        rows += [([("GL", a), ("D", n - a)], top) for a in range(1, n)]
    return rows


def d4_exceptions():
    """(iv)(a): L_{2,3} with P_4 and L_{2,4} with P_3, as explicit root sets."""
    def levi(*base):
        return frozenset(list(base) + [tuple(-x for x in b) for b in base])
    L23 = levi((1, -1, 0, 0), (0, 0, 1, 1))
    L24 = levi((1, -1, 0, 0), (0, 0, 1, -1))
    return [(L23, 4), (L24, 3)]


def infinite_rows(fam, n):
    rows = []
    if fam == "A":
        mid = set(range(2, n))
        rows += [([("GL", a), ("GL", b), ("GL", c), ("GL", d)], mid) for a, b, c, d in _parts(n + 1, (1, 1, 1, 1))]
    elif fam == "B":
        ends = {1, n}
        rows += [([("B", a), ("D", b), ("D", c)], ends) for a in range(0, n - 1) for b, c in _parts(n - a, (1, 1))]
        rows += [([("GL", a), ("GL", b)], ends) for a, b in _parts(n, (1, 1))]
    elif fam == "C":
        ends = {1, n}
        rows += [([("GL", a), ("GL", b), ("C", n - a - b)], ends) for s in range(2, n + 1) for a, b in _parts(s, (1, 1))]
        rows += [([("C", a), ("C", b), ("C", c), ("C", d)], {n}) for a, b, c, d in _parts(n, (1, 1, 1, 1))]
        rows += [([("GL", a), ("C", b), ("C", c)], {n}) for a in range(2, n) for b, c in _parts(n - a, (1, 1))]
    else:
        top = {n - 1, n}
        rows += [([("D", a), ("D", b), ("D", c)], {1}) for a, b, c in _parts(n, (1, 1, 1))]
        rows += [([("D", a), ("D", b), ("D", c), ("D", d)], top) for a, b, c, d in _parts(n, (1, 1, 1, 1))]
        rows += [([("GL", a), ("D", b), ("D", c)], top) for a in range(2, n) for b, c in _parts(n - a, (1, 1))]
        rows += [([("GL", a), ("GL", b)], top) for a, b in _parts(n, (2, 2))]
    return rows


def expected_verdict(G, roots: frozenset, node: int) -> str:
    """Finite or Infinite for (X, P_node), X given by its root set; raises if uncovered."""
    fam, n = G.family, G.rank
    spherical = any(conj_contained(fam, n, r, roots)
                    for s in table1(fam, n) for r in variants(fam, n, s))
    finite = spherical or any(
        conj_contained(fam, n, r, roots)
        for s, nodes in finite_rows(fam, n) if nodes is None or node in nodes
        for r in variants(fam, n, s))
    if fam == "D" and n == 4:
        finite = finite or any(node == p and conj_contained(fam, n, L, roots) for L, p in d4_exceptions())
    infinite = not spherical and node not in spherical_levi_nodes(fam, n)
    for s, nodes in infinite_rows(fam, n):
        if node not in nodes:
            continue
        for r in variants(fam, n, s):
            if fam == "D" and n == 4 and any(node == p and conj_equal(fam, n, r, L) for L, p in d4_exceptions()):
                continue
            if conj_contained(fam, n, roots, r):
                infinite = True
    if finite == infinite:
        raise AssertionError(f"fixture {'overlap' if finite else 'gap'} at {G.name}, P{node}, {sorted(roots)}")
    return "Finite" if finite else "Infinite"
