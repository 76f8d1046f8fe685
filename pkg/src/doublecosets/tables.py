"""Embedded classification data and generators of its instances.

Each row is parametrized by block sizes; ``instances(G)`` returns every
concrete (X, P) pair the row describes in the group G.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Iterator

from .rootsys import RootSystem
from .subgroups import (
    FactorSpec,
    ParabolicSpec,
    SpecError,
    SubgroupSpec,
    contained_in,
    make_parabolic,
    make_subgroup,
)


def spec_from_blocks(G: RootSystem, blocks, dn_class: str | None = None) -> SubgroupSpec:
    """Subgroup from (kind, size) blocks; GL_1 and D_1 become torus coordinates."""
    fam, n = G.family, G.rank
    factors, torus = [], 0
    for kind, k in blocks:
        if kind == "GL":
            factors.append(FactorSpec("A", k - 1))
            if fam != "A":
                torus += 1
        elif kind == "T":
            torus += 1
        else:
            factors.append(FactorSpec(kind, k))
    if fam == "A":
        torus = n - sum(f.rank for f in factors)
    X = make_subgroup(G, factors, torus)
    if X.dn_class and dn_class:
        X = SubgroupSpec(X.ambient, X.factors, X.central_torus_rank, dn_class)
    return X


def _parts(total: int, count: int, lows: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """Ordered tuples with given lower bounds summing to total."""
    if count == 0:
        if total == 0:
            yield ()
        return
    for first in range(lows[0], total + 1):
        for rest in _parts(total - first, count - 1, lows[1:]):
            yield (first,) + rest


@dataclass(frozen=True)
class Row:
    table: str
    label: str
    family: str
    shapes: tuple  # tuples of (kind, min size); one entry per block
    nodes: Callable[[int], list[int]]
    free_shapes: bool = False  # any number of repeated blocks of the last kind
    note: str = ""

    def provenance(self) -> str:
        return f"{self.table}: {self.label}"

    def subgroups(self, G: RootSystem) -> list[SubgroupSpec]:
        n = G.rank
        total = n + 1 if G.family == "A" else n
        found = set()
        shape_list = [self.shapes]
        if self.free_shapes:
            head, last = self.shapes[:-1], self.shapes[-1]
            shape_list = [head + (last,) * r for r in range(0, total + 1)]
        for shapes in shape_list:
            lows = tuple(low for _, low in shapes)
            if sum(lows) > total:
                continue
            for sizes in _parts(total, len(shapes), lows):
                blocks = [(kind, k) for (kind, _), k in zip(shapes, sizes) if k > 0]
                try:
                    X = spec_from_blocks(G, blocks)
                except SpecError:
                    continue
                found.add(X)
                if X.dn_class:
                    found.add(SubgroupSpec(X.ambient, X.factors, X.central_torus_rank,
                                           "+" if X.dn_class == "-" else "-"))
        return sorted(found, key=lambda x: x.label())

    def instances(self, G: RootSystem) -> list[tuple[SubgroupSpec, ParabolicSpec]]:
        if G.family != self.family:
            return []
        out = []
        for X in self.subgroups(G):
            for i in self.nodes(G.rank):
                if 1 <= i <= G.rank:
                    P = make_parabolic(G, [i])
                    if self.accepts(G, X, P):
                        out.append((X, P))
        return out

    def accepts(self, G, X, P) -> bool:
        if self.note == "not-iv-a" and G.rank == 4 and X.gl_sizes() == [2, 2] and not X.sizes("D"):
            return not ((X.dn_class == "-" and P.node == 4) or (X.dn_class == "+" and P.node == 3))
        if self.note == "iv-a":
            return (X.dn_class == "-" and P.node == 4) or (X.dn_class == "+" and P.node == 3)
        return True


def _ends(n):
    return sorted({1, n})


def _all(n):
    return list(range(1, n + 1))


def _first(n):
    return [1]


def _last(n):
    return [n]


def _top(n):
    return [n - 1, n]


def _middle(n):
    return list(range(2, n))


TABLE1 = [
    ("A_nA_mT_1", "A_{n+m+1}"),
    ("C_nC_m", "C_{n+m}"),
    ("C_{n-1}T_1", "C_n"),
    ("A_{n-1}T_1", "C_n"),
    ("B_nD_m", "B_{n+m}"),
    ("A_{n-1}T_1", "B_n"),
    ("D_nD_m", "D_{n+m}"),
    ("A_{n-1}T_1", "D_n"),
]

# exceptional finiteness clauses (X non-spherical allowed)
THEOREM_CLAUSES = [
    Row("Theorem 1.1", "(i)(a)", "A", (("GL", 1),), _ends, free_shapes=True),
    Row("Theorem 1.1", "(i)(b)", "A", (("GL", 1),) * 3, _all),
    Row("Theorem 1.1", "(ii)", "B", (("GL", 1), ("B", 0)), _ends),
    Row("Theorem 1.1", "(iii)(a)", "C", (("C", 1),), _first, free_shapes=True),
    Row("Theorem 1.1", "(iii)(a)", "C", (("GL", 1), ("C", 1)), _first, free_shapes=True),
    Row("Theorem 1.1", "(iii)(b)", "C", (("C", 0),) * 3, _last),
    Row("Theorem 1.1", "(iii)(b)", "C", (("T", 1), ("C", 0), ("C", 0)), _last),
    Row("Theorem 1.1", "(iii)(b)", "C", (("GL", 1), ("C", 0)), _last),
    Row("Theorem 1.1", "(iv)(a)", "D", (("GL", 2), ("GL", 2)), lambda n: [3, 4] if n == 4 else [], note="iv-a"),
    Row("Theorem 1.1", "(iv)(b)", "D", (("GL", 1), ("D", 1)), _first),
    Row("Theorem 1.1", "(iv)(b)", "D", (("GL", 1), ("GL", 1)), _first),
    Row("Theorem 1.1", "(iv)(c)", "D", (("D", 1),) * 3, _top),
    Row("Theorem 1.1", "(iv)(c)", "D", (("GL", 1), ("D", 1)), _top),
]

TABLE3 = [
    Row("Table 3", "A_{n_1}A_{n_2}A_{n_3}A_{n_4}T_3, P_i (2<=i<=n-1)", "A", (("GL", 1),) * 4, _middle),
    Row("Table 3", "B_{n_1}D_{n_2}D_{n_3}, P_1/P_n", "B", (("B", 0), ("D", 1), ("D", 1)), _ends),
    Row("Table 3", "A_{n_1}A_{n_2}T_2, P_1/P_n", "B", (("GL", 1), ("GL", 1)), _ends),
    Row("Table 3", "A_{n_1}A_{n_2}C_{n_3}T_2, P_1/P_n", "C", (("GL", 1), ("GL", 1), ("C", 0)), _ends),
    Row("Table 3", "C_{n_1}C_{n_2}C_{n_3}C_{n_4} (n_i>=1), P_n", "C", (("C", 1),) * 4, _last),
    Row("Table 3", "A_{n_1}C_{n_2}C_{n_3}T_1 (n_i>=1), P_n", "C", (("GL", 2), ("C", 1), ("C", 1)), _last),
    Row("Table 3", "D_{n_1}D_{n_2}D_{n_3}, P_1", "D", (("D", 1),) * 3, _first),
    Row("Table 3", "D_{n_1}D_{n_2}D_{n_3}D_{n_4}, P_{n-1}/P_n", "D", (("D", 1),) * 4, _top),
    Row("Table 3", "A_{n_1}D_{n_2}D_{n_3} (n_1>=1), P_{n-1}/P_n", "D", (("GL", 2), ("D", 1), ("D", 1)), _top),
    Row("Table 3", "A_{n_1}A_{n_2}T_2 (n_i>=1), P_{n-1}/P_n", "D", (("GL", 2), ("GL", 2)), _top, note="not-iv-a"),
]


def table3_row(G: RootSystem, X: SubgroupSpec, P: ParabolicSpec) -> Row | None:
    """The Table 3 row having an instance at P that contains X."""
    for row in TABLE3:
        if row.family != G.family or not P.is_maximal() or P.node not in row.nodes(G.rank):
            continue
        for Y, Q in row.instances(G):
            if Q == P and contained_in(X, Y):
                return row
    return None


def table3_cover(G: RootSystem, X: SubgroupSpec, P: ParabolicSpec) -> str | None:
    row = table3_row(G, X, P)
    return row.provenance() if row else None


def finite_instances(G: RootSystem):
    """(X, P, clause) for every instantiation of the exceptional finiteness clauses."""
    out = []
    for row in THEOREM_CLAUSES:
        for X, P in row.instances(G):
            out.append((X, P, row.provenance()))
    return out


def infinite_instances(G: RootSystem):
    out = []
    for row in TABLE3:
        for X, P in row.instances(G):
            out.append((X, P, row.provenance()))
    return out


def render_tables() -> list[dict]:
    rows = [{"table": "Table 1", "label": f"{x} <= {g}", "parabolics": "any"} for x, g in TABLE1]
    names = {_ends: "P_1, P_n", _all: "any maximal", _first: "P_1", _last: "P_n", _top: "P_{n-1}, P_n",
             _middle: "P_i, 2<=i<=n-1"}
    for row in THEOREM_CLAUSES + TABLE3:
        shape = " ".join(f"{k}{'>=' + str(m) if m else ''}" for k, m in row.shapes)
        if row.free_shapes:
            shape += " ..."
        rows.append({
            "table": row.table,
            "label": row.label,
            "group": row.family,
            "blocks": shape,
            "parabolics": names.get(row.nodes, "P_3 (class +), P_4 (class -) in D_4"),
        })
    return rows
