"""Maximal rank subgroups X, parabolic subgroups P, and the finiteness decision.

A subgroup is described symbolically by its simple factors and central torus
rank.  Inside the classical groups every such subgroup is realized on blocks
of coordinates of the natural module:

* ``GL`` block of size k -- factor A_{k-1} acting on a dual pair E + F
  (type A: on a k-dimensional summand),
* ``B``/``C``/``D`` block of size k -- SO_{2k+1}, Sp_{2k}, SO_{2k} on an
  orthogonal summand,
* free coordinates -- one-dimensional tori (D_1, or A_0 T_1).

For D_n a product of GL blocks of even sizes splits into two classes that are
swapped by a reflection; ``dn_class`` records which one ("+" is the class of
the Levi L_{..., n}, "-" that of L_{..., n-1}).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .rootsys import (
    RootSystem,
    Subsystem,
    build_root_system,
    neg,
    rank as vrank,
    simple_system,
    subsystem,
)

FLAVORS = ("linear", "linear-pair", "orthogonal", "symplectic", "torus")
_TAGS = {"gl": "linear-pair", "o": "orthogonal", "sp": "symplectic"}
_TAG_OF = {v: k for k, v in _TAGS.items()}


class SpecError(ValueError):
    """Invalid group, subgroup or parabolic description."""


def _default_flavor(ambient: str, family: str) -> str:
    if family == "T":
        return "torus"
    if family == "A":
        return "linear" if ambient == "A" else "linear-pair"
    if family == "C":
        return "symplectic"
    return "orthogonal"


@dataclass(frozen=True, order=True)
class FactorSpec:
    family: str
    rank: int
    flavor: str = ""

    def label(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class Block:
    kind: str  # GL, B, C, D or T (a free torus coordinate)
    size: int


@dataclass(frozen=True)
class SubgroupSpec:
    ambient: tuple[str, int]
    factors: tuple[FactorSpec, ...]
    central_torus_rank: int
    dn_class: str | None = None

    # -- derived structure ------------------------------------------------

    @cached_property
    def blocks(self) -> tuple[Block, ...]:
        fam, n = self.ambient
        out = []
        gl = 0
        for f in self.factors:
            if f.family == "A":
                out.append(Block("GL", f.rank + 1))
                gl += 1
            else:
                out.append(Block(f.family, f.rank))
        free = self.central_torus_rank + (1 if fam == "A" else 0) - gl
        out += [Block("T", 1)] * free
        return tuple(out)

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors) + self.central_torus_rank

    def gl_sizes(self) -> list[int]:
        fam = self.ambient[0]
        sizes = [b.size for b in self.blocks if b.kind == "GL"]
        if fam in ("A", "C"):
            sizes += [1 for b in self.blocks if b.kind == "T"]
        return sorted(sizes)

    def sizes(self, kind: str) -> list[int]:
        """Block sizes of one kind; free tori count as D_1 in types B and D."""
        s = [b.size for b in self.blocks if b.kind == kind]
        if kind == "D" and self.ambient[0] in ("B", "D"):
            s += [1 for b in self.blocks if b.kind == "T"]
        return sorted(s)

    @property
    def b_size(self) -> int:
        return sum(b.size for b in self.blocks if b.kind == "B")

    def is_split(self) -> bool:
        """True when this D_n subgroup class splits under W(D_n)."""
        if self.ambient[0] != "D":
            return False
        return all(b.kind == "GL" and b.size % 2 == 0 for b in self.blocks)

    # -- presentation -----------------------------------------------------

    def label(self, tags: bool = True) -> str:
        fam = self.ambient[0]
        parts = []
        for f in self.factors:
            s = f.label()
            if tags and f.family == "A" and fam != "A":
                s += "[gl]"
            parts.append(s)
        if self.central_torus_rank:
            parts.append(f"T{self.central_torus_rank}")
        s = "*".join(parts) if parts else "T0"
        if self.dn_class:
            s += "@" + self.dn_class
        return s

    def __str__(self) -> str:
        return self.label()

    @property
    def group_label(self) -> str:
        return f"{self.ambient[0]}{self.ambient[1]}"


@dataclass(frozen=True)
class ParabolicSpec:
    crossed: frozenset
    rank: int = 0
    family: str = ""

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.crossed))

    def is_maximal(self) -> bool:
        return len(self.crossed) == 1

    @property
    def node(self) -> int:
        if not self.is_maximal():
            raise SpecError("parabolic is not maximal")
        return next(iter(self.crossed))

    @property
    def dn_class(self) -> str | None:
        if self.family != "D":
            return None
        top = self.crossed & {self.rank - 1, self.rank}
        if top == {self.rank}:
            return "+"
        if top == {self.rank - 1}:
            return "-"
        return None

    def label(self) -> str:
        return "P" + ",".join(str(i) for i in self.nodes)

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class Verdict:
    value: str  # "Finite" or "Infinite"
    provenance: str

    @property
    def finite(self) -> bool:
        return self.value == "Finite"


# -- parsing ------------------------------------------------------------------

_GROUP_RE = re.compile(r"^([ABCD])(\d+)$")
_FACTOR_RE = re.compile(r"^([ABCDT])(\d+)(?:\[([a-z]+)\])?$")


def parse_group(text: str) -> RootSystem:
    m = _GROUP_RE.match(text.strip().upper())
    if not m:
        raise SpecError(f"cannot parse group {text!r}")
    fam, n = m.group(1), int(m.group(2))
    if n < 1 or (fam == "D" and n < 2):
        raise SpecError(f"unsupported group {text!r}")
    return build_root_system(fam, n)


def parse_subgroup(G: RootSystem, text: str) -> SubgroupSpec:
    fam, n = G.family, G.rank
    text = text.strip()
    dn_class = None
    if "@" in text:
        text, dn_class = text.split("@", 1)
        if dn_class not in ("+", "-"):
            raise SpecError(f"class tag must be @+ or @-, got @{dn_class}")
    factors = []
    torus = 0
    pos = 0
    for tok in text.split("*"):
        m = _FACTOR_RE.match(tok)
        if not m:
            raise SpecError(f"cannot parse factor {tok!r} at offset {pos}")
        f, k, tag = m.group(1), int(m.group(2)), m.group(3)
        if f == "T":
            if tag:
                raise SpecError(f"torus factor takes no flavor tag at offset {pos}")
            torus += k
        else:
            flavor = _default_flavor(fam, f)
            if tag is not None:
                if tag not in _TAGS or _TAGS[tag] != (flavor if flavor != "linear" else "linear-pair"):
                    raise SpecError(f"illegal flavor [{tag}] for {f}{k} in {G.name} at offset {pos}")
            factors.append(FactorSpec(f, k, flavor))
        pos += len(tok) + 1
    return make_subgroup(G, factors, torus, dn_class)


def make_subgroup(
    G: RootSystem,
    factors: Iterable[FactorSpec | tuple],
    torus: int = 0,
    dn_class: str | None = None,
) -> SubgroupSpec:
    """Validate and normalize a subgroup description."""
    fam, n = G.family, G.rank
    facs = []
    for f in factors:
        if not isinstance(f, FactorSpec):
            f = FactorSpec(f[0], f[1], f[2] if len(f) > 2 else _default_flavor(fam, f[0]))
        if not f.flavor:
            f = FactorSpec(f.family, f.rank, _default_flavor(fam, f.family))
        facs.append(f)
    legal = {"A": "A", "B": "ABD", "C": "AC", "D": "AD"}[fam]
    for f in facs:
        if f.family not in legal:
            raise SpecError(f"factor {f.label()} is not legal in {G.name}")
        if f.flavor != _default_flavor(fam, f.family):
            raise SpecError(f"illegal flavor {f.flavor} for {f.label()} in {G.name}")
        if f.rank < 0:
            raise SpecError("negative rank")
    if sum(1 for f in facs if f.family == "B" and f.rank > 0) > 1:
        raise SpecError("at most one B factor fits in an odd orthogonal group")
    if sum(f.rank for f in facs) + torus != n:
        raise SpecError(
            f"rank mismatch: factor ranks {sum(f.rank for f in facs)} + torus {torus} != {n}"
        )
    # degenerate factors: A_0, B_0, C_0 are trivial, D_1 is a torus
    out = []
    for f in facs:
        if f.family in "ABC" and f.rank == 0:
            if f.family == "A":
                continue  # A_0 T_1 keeps its torus; the coordinate becomes free
            continue
        if f.family == "D" and f.rank == 1:
            torus += 1
            continue
        if f.family == "D" and f.rank == 0:
            raise SpecError("D_0 is not allowed")
        out.append(f)
    ngl = sum(1 for f in out if f.family == "A")
    free = torus + (1 if fam == "A" else 0) - ngl
    if free < 0:
        raise SpecError(f"central torus rank {torus} too small for {ngl} linear factors")
    spec = SubgroupSpec((fam, n), tuple(sorted(out)), torus, None)
    if spec.is_split():
        spec = SubgroupSpec((fam, n), spec.factors, torus, dn_class or "-")
    return spec


def parse_parabolic(G: RootSystem, text: str) -> ParabolicSpec:
    t = text.strip()
    if not t.upper().startswith("P"):
        raise SpecError(f"cannot parse parabolic {text!r}")
    body = t[1:]
    if not body:
        raise SpecError("empty crossed node set")
    n = G.rank
    nodes = set()
    for tok in body.split(","):
        tok = tok.strip()
        if tok == "n":
            nodes.add(n)
        elif tok in ("n+", "n-"):
            if G.family != "D":
                raise SpecError("n+/n- classes exist only in type D")
            nodes.add(n if tok == "n+" else n - 1)
        elif tok.isdigit():
            nodes.add(int(tok))
        else:
            raise SpecError(f"cannot parse parabolic node {tok!r}")
    return make_parabolic(G, nodes)


def make_parabolic(G: RootSystem, nodes: Iterable[int]) -> ParabolicSpec:
    nodes = frozenset(nodes)
    if not nodes:
        raise SpecError("empty crossed node set")
    if any(i < 1 or i > G.rank for i in nodes):
        raise SpecError(f"node out of range for {G.name}: {sorted(nodes)}")
    return ParabolicSpec(nodes, G.rank, G.family)


def maximal_parabolics(G: RootSystem) -> list[ParabolicSpec]:
    return [make_parabolic(G, [i]) for i in range(1, G.rank + 1)]


# -- realization as root subsystems --------------------------------------------


def _block_roots(kind: str, coords: Sequence[int], m: int) -> list[tuple[int, ...]]:
    roots = []

    def vec(pairs):
        v = [0] * m
        for i, c in pairs:
            v[i] += c
        return tuple(v)

    for a in coords:
        for b in coords:
            if a != b:
                roots.append(vec([(a, 1), (b, -1)]))
                if kind in "BCD" and a < b:
                    roots.append(vec([(a, 1), (b, 1)]))
                    roots.append(vec([(a, -1), (b, -1)]))
        if kind == "B":
            roots += [vec([(a, 1)]), vec([(a, -1)])]
        if kind == "C":
            roots += [vec([(a, 2)]), vec([(a, -2)])]
    if kind == "GL":
        return roots
    return roots


def subsystem_of_X(G: RootSystem, X: SubgroupSpec) -> Subsystem:
    """Phi(X) placed on consecutive coordinate blocks in factor order."""
    if X.ambient != (G.family, G.rank):
        raise SpecError(f"subgroup of {X.group_label} used in {G.name}")
    m = G.dim
    roots = []
    start = 0
    for b in X.blocks:
        coords = list(range(start, start + b.size))
        start += b.size
        if b.kind != "T":
            roots += _block_roots(b.kind, coords, m)
    if X.dn_class == "-":
        last = m - 1
        roots = [tuple(-x if i == last else x for i, x in enumerate(r)) for r in roots]
    roots_set = frozenset(roots)
    return subsystem(G, roots_set, simple_system(roots_set, m))


def levi_subsystem(G: RootSystem, P: ParabolicSpec) -> Subsystem:
    idx = [i - 1 for i in P.crossed]
    roots = [r for r in G.roots if all(G.coefficients(r)[i] == 0 for i in idx)]
    base = [G.simple_root(i) for i in range(1, G.rank + 1) if i not in P.crossed]
    return subsystem(G, roots, base)


def levi_spec(G: RootSystem, P: ParabolicSpec) -> SubgroupSpec:
    return spec_from_subsystem(levi_subsystem(G, P))


def spec_from_subsystem(s: Subsystem) -> SubgroupSpec:
    """Identify the block structure of a maximal rank closed subsystem."""
    G = s.ambient
    fam, n, m = G.family, G.rank, G.dim
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for r in s.roots:
        sup = [i for i, x in enumerate(r) if x]
        for i in sup[1:]:
            parent[find(i)] = find(sup[0])
    blocks: dict[int, list[int]] = {}
    for i in range(m):
        blocks.setdefault(find(i), []).append(i)
    factors = []
    parity = 0
    for coords in blocks.values():
        broots = [r for r in s.roots if any(r[i] for i in coords)]
        k = len(coords)
        if not broots:
            continue
        rk = vrank(broots)
        if rk == k - 1:
            if len(broots) != k * (k - 1):
                raise SpecError("block is not a full linear factor")
            factors.append(FactorSpec("A", k - 1, _default_flavor(fam, "A")))
            eps = {coords[0]: 1}
            frontier = [coords[0]]
            while frontier:
                a = frontier.pop()
                for r in broots:
                    if r[a]:
                        b = next(i for i, x in enumerate(r) if x and i != a)
                        if b not in eps:
                            eps[b] = -r[a] * r[b] * eps[a]
                            frontier.append(b)
            parity += sum(1 for v in eps.values() if v < 0)
        elif rk == k:
            if any(sum(1 for x in r if x) == 1 and abs(max(r, key=abs)) == 1 for r in broots):
                kind = "B"
            elif any(sum(1 for x in r if x) == 1 for r in broots):
                kind = "C"
            else:
                kind = "D"
            expected = {"B": 2 * k * k, "C": 2 * k * k, "D": 2 * k * (k - 1)}[kind]
            if len(broots) != expected:
                raise SpecError(f"block of type {kind}{k} is incomplete")
            factors.append(FactorSpec(kind, k, _default_flavor(fam, kind)))
        else:
            raise SpecError("unexpected block structure")
    torus = n - sum(f.rank for f in factors)
    G_ = build_root_system(fam, n)
    spec = make_subgroup(G_, factors, torus)
    if spec.is_split():
        spec = SubgroupSpec(spec.ambient, spec.factors, spec.central_torus_rank, "-" if parity % 2 else "+")
    return spec


# -- enumeration ----------------------------------------------------------------


def _component_data(G: RootSystem, roots: frozenset):
    s = Subsystem(G, roots, ())
    return s.components


def _generated(G: RootSystem, base: Sequence[tuple]) -> frozenset:
    """Root system with the given base: its orbit under its own reflections."""
    found = set(base) | {neg(b) for b in base}
    frontier = list(found)
    while frontier:
        new = []
        for r in frontier:
            for a in base:
                img = G.reflect(a, r)
                if img not in found:
                    found.add(img)
                    new.append(img)
        frontier = new
    return frozenset(found)


def enumerate_maximal_rank_subgroups(
    G: RootSystem, over_Z: bool = True, rank_bound: int = 8
) -> list[tuple[SubgroupSpec, Subsystem]]:
    """Maximal rank subsystems up to conjugacy, via Borel-de Siebenthal.

    Starting from Phi(G), repeatedly replace one irreducible component by
    the subsystem obtained by deleting a node from its extended Dynkin
    diagram, or from its ordinary diagram (Levi type).
    """
    if not over_Z:
        raise SpecError("only subgroups defined over Z are supported")
    if G.rank > rank_bound:
        raise SpecError(f"rank {G.rank} exceeds bound {rank_bound}")
    seen: dict[SubgroupSpec, frozenset] = {}
    stack = [frozenset(G.roots)]
    while stack:
        roots = stack.pop()
        spec = spec_from_subsystem(Subsystem(G, roots, ()))
        if spec in seen:
            continue
        seen[spec] = roots
        for cbase, croots in _component_data(G, roots):
            rest = roots - frozenset(croots)
            cbase = list(cbase)
            comp_pos = [r for r in croots if sum(_coeffs_in(cbase, r)) > 0]
            highest = max(comp_pos, key=lambda r: sum(_coeffs_in(cbase, r)))
            extended = cbase + [neg(highest)]
            for drop in range(len(extended)):
                nb = [b for i, b in enumerate(extended) if i != drop]
                stack.append(rest | _generated(G, nb))
            for drop in range(len(cbase)):
                nb = [b for i, b in enumerate(cbase) if i != drop]
                stack.append(rest | (_generated(G, nb) if nb else frozenset()))
    # the deleted-node construction cannot flip D_n classes; add the partners
    for spec in list(seen):
        if spec.dn_class:
            other = SubgroupSpec(spec.ambient, spec.factors, spec.central_torus_rank,
                                 "+" if spec.dn_class == "-" else "-")
            seen.setdefault(other, None)
    out = sorted(seen, key=subgroup_sort_key)
    return [(x, subsystem_of_X(G, x)) for x in out]


def _coeffs_in(base, r):
    from .rootsys import solve_coordinates

    return [int(c) for c in solve_coordinates(base, r)]


def subgroup_sort_key(x: SubgroupSpec):
    return (-sum(f.rank for f in x.factors), [(f.family, -f.rank) for f in x.factors],
            x.central_torus_rank, x.dn_class or "")


# -- Table 1 and Theorem 1.1 -----------------------------------------------------


def spherical_row(G: RootSystem, X: SubgroupSpec) -> str | None:
    """The Table 1 row matched by X, or None when X is not spherical."""
    fam, n = G.family, G.rank
    if X.rank == n and not X.central_torus_rank and len(X.factors) == 1 and X.factors[0].family == fam:
        return "Table 1: X = G"
    gl = X.gl_sizes()
    if fam == "A":
        return "Table 1: A_nA_mT_1" if len(gl) <= 2 else None
    if fam == "B":
        d = X.sizes("D")
        if not gl and len(d) <= 1:
            return "Table 1: B_nD_m"
        if gl == [n]:
            return "Table 1: A_{n-1}T_1 in B_n"
        return None
    if fam == "C":
        c = X.sizes("C")
        if not gl and len(c) <= 2:
            return "Table 1: C_nC_m"
        if gl == [1] and len(c) <= 1:
            return "Table 1: C_{n-1}T_1"
        if gl == [n]:
            return "Table 1: A_{n-1}T_1 in C_n"
        return None
    d = X.sizes("D")
    if not gl and len(d) <= 2:
        return "Table 1: D_nD_m"
    if gl == [n]:
        return "Table 1: A_{n-1}T_1 in D_n"
    return None


def is_spherical(G: RootSystem, X: SubgroupSpec) -> bool:
    return spherical_row(G, X) is not None


def theorem_clause(G: RootSystem, X: SubgroupSpec, P: ParabolicSpec) -> str | None:
    """The exceptional finiteness clause of the classification matched by (X, P)."""
    if not P.is_maximal():
        return None
    fam, n = G.family, G.rank
    i = P.node
    gl = X.gl_sizes()
    if fam == "A":
        if i in (1, n):
            return "Theorem 1.1(i)(a)"
        if len(gl) == 3:
            return "Theorem 1.1(i)(b)"
        return None
    if fam == "B":
        if i in (1, n) and len(gl) == 1 and not X.sizes("D"):
            return "Theorem 1.1(ii)"
        return None
    if fam == "C":
        c = X.sizes("C")
        if i == 1 and len(gl) <= 1:
            return "Theorem 1.1(iii)(a)"
        if i == n and (
            (not gl and len(c) <= 3) or (gl == [1] and len(c) <= 2) or (len(gl) == 1 and len(c) <= 1)
        ):
            return "Theorem 1.1(iii)(b)"
        return None
    d = X.sizes("D")
    if n == 4 and gl == [2, 2] and ((X.dn_class == "-" and i == 4) or (X.dn_class == "+" and i == 3)):
        return "Theorem 1.1(iv)(a)"
    if i == 1 and ((len(gl) <= 1 and len(d) <= 1) or (len(gl) == 2 and not d)):
        return "Theorem 1.1(iv)(b)"
    if i in (n - 1, n) and ((not gl and len(d) <= 3) or (len(gl) <= 1 and len(d) <= 1)):
        return "Theorem 1.1(iv)(c)"
    return None


def classify_finiteness(G: RootSystem, X: SubgroupSpec, P: ParabolicSpec) -> Verdict:
    if X.ambient != (G.family, G.rank):
        raise SpecError(f"subgroup of {X.group_label} used in {G.name}")
    if P.rank != G.rank or P.family != G.family:
        raise SpecError("parabolic belongs to a different group")
    if len(P.crossed) == 0:
        raise SpecError("P = G is excluded")
    row = spherical_row(G, X)
    if row:
        return Verdict("Finite", row)
    clause = theorem_clause(G, X, P)
    if clause:
        return Verdict("Finite", clause)
    return Verdict("Infinite", infinite_provenance(G, X, P))


def infinite_provenance(G: RootSystem, X: SubgroupSpec, P: ParabolicSpec) -> str:
    from .tables import table3_cover

    if not P.is_maximal():
        return "Theorem 1.1: X not spherical, P not maximal"
    if not is_spherical(G, levi_spec(G, P)):
        return "Theorem 4.1: neither X nor L spherical"
    row = table3_cover(G, X, P)
    return row or "Theorem 1.1: no clause applies"


# -- containment up to conjugacy ----------------------------------------------------

_ACCEPTS = {
    "GL": {"GL", "T"},
    "D": {"GL", "D", "T"},
    "B": {"GL", "D", "T", "B"},
    "C": {"GL", "C", "T"},
    "T": {"T"},
}


def contained_in(X: SubgroupSpec, Y: SubgroupSpec) -> bool:
    """Whether some conjugate of X lies in Y (block refinement test)."""
    if X.ambient != Y.ambient:
        return False
    src = sorted(X.blocks, key=lambda b: -b.size)
    dst = list(Y.blocks)
    room = [b.size for b in dst]
    if Y.ambient[0] == "A":
        accepts = [{"GL", "T"} for _ in dst]
    else:
        accepts = [_ACCEPTS[b.kind] for b in dst]
    # B blocks with size 0 never occur; a B block in X must land in Y's B block
    def rec(i: int) -> bool:
        if i == len(src):
            return all(r == 0 for r in room)
        b = src[i]
        tried = set()
        for j, d in enumerate(dst):
            key = (d, room[j])
            if key in tried or room[j] < b.size or b.kind not in accepts[j]:
                continue
            tried.add(key)
            room[j] -= b.size
            if rec(i + 1):
                room[j] += b.size
                return True
            room[j] += b.size
        return False

    if not rec(0):
        return False
    if Y.dn_class and X.dn_class:
        return X.dn_class == Y.dn_class
    return True
