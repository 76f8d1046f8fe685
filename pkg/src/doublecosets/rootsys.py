"""Root systems of types A, B, C, D in their standard Euclidean realization.

Roots are tuples of ints.  Type A_n lives in Z^(n+1) (roots e_i - e_j); the
other families live in Z^n.  Simple roots follow the Bourbaki numbering.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

Root = tuple[int, ...]

FAMILIES = ("A", "B", "C", "D")


class RootSystemError(ValueError):
    pass


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def add(u: Sequence[int], v: Sequence[int]) -> Root:
    return tuple(a + b for a, b in zip(u, v))


def neg(u: Sequence[int]) -> Root:
    return tuple(-a for a in u)


def scale(c: int, u: Sequence[int]) -> Root:
    return tuple(c * a for a in u)


def unit(m: int, i: int, c: int = 1) -> list[int]:
    v = [0] * m
    v[i] = c
    return v


# -- exact linear algebra -----------------------------------------------------


def _echelon(rows: Iterable[Sequence]) -> list[list[Fraction]]:
    """Reduced row echelon form over Q (zero rows dropped)."""
    mat = [[Fraction(x) for x in r] for r in rows]
    if not mat:
        return []
    ncols = len(mat[0])
    out: list[list[Fraction]] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        mat[r] = [x / p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return [row for row in mat[:r]]


def rank(vectors: Iterable[Sequence[int]]) -> int:
    return len(_echelon(list(vectors)))


class RationalSpan:
    """Membership oracle for the Q-span of a set of integer vectors."""

    def __init__(self, vectors: Iterable[Sequence[int]]):
        self.rows = _echelon(list(vectors))
        self.pivots = [next(i for i, x in enumerate(r) if x != 0) for r in self.rows]

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __contains__(self, v: Sequence[int]) -> bool:
        w = [Fraction(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            if w[p] != 0:
                f = w[p]
                w = [a - f * b for a, b in zip(w, row)]
        return not any(w)


def solve_coordinates(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction] | None:
    """Coefficients c with sum c_i basis_i = v, or None if v is outside the span.

    The basis must be linearly independent.
    """
    k = len(basis)
    m = len(v)
    # augmented system: columns are basis vectors
    mat = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(m)]
    r = 0
    pivcols = []
    for c in range(k):
        piv = next((i for i in range(r, m) if mat[i][c] != 0), None)
        if piv is None:
            raise RootSystemError("basis is not linearly independent")
        mat[r], mat[piv] = mat[piv], mat[r]
        p = mat[r][c]
        mat[r] = [x / p for x in mat[r]]
        for i in range(m):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivcols.append(c)
        r += 1
    if any(mat[i][k] != 0 for i in range(r, m)):
        return None
    return [mat[i][k] for i in range(k)]


# -- root systems -------------------------------------------------------------


def ambient_dim(family: str, rank_: int) -> int:
    return rank_ + 1 if family == "A" else rank_


def _roots_and_simple(family: str, n: int) -> tuple[list[Root], list[Root]]:
    m = ambient_dim(family, n)
    roots: list[Root] = []
    for i, j in itertools.permutations(range(m), 2):
        if family == "A":
            roots.append(add(unit(m, i), unit(m, j, -1)))
        else:
            roots.append(add(unit(m, i), unit(m, j, -1)))
            if i < j:
                roots.append(add(unit(m, i), unit(m, j)))
                roots.append(add(unit(m, i, -1), unit(m, j, -1)))
    if family == "B":
        for i in range(m):
            roots += [tuple(unit(m, i)), tuple(unit(m, i, -1))]
    if family == "C":
        for i in range(m):
            roots += [tuple(unit(m, i, 2)), tuple(unit(m, i, -2))]

    simple = [add(unit(m, i), unit(m, i + 1, -1)) for i in range(n - 1)]
    if family == "A":
        simple.append(add(unit(m, n - 1), unit(m, n, -1)))
    elif family == "B":
        simple.append(tuple(unit(m, n - 1)))
    elif family == "C":
        simple.append(tuple(unit(m, n - 1, 2)))
    else:
        simple.append(add(unit(m, n - 2), unit(m, n - 1)))
    return roots, simple


@dataclass(frozen=True)
class DynkinDiagram:
    """Nodes 1..n (and 0 for the affine node); edges carry bond multiplicity.

    ``arrows[(i, j)]`` is True when the bond between i and j points from the
    long root i to the short root j.
    """

    nodes: tuple[int, ...]
    roots: dict
    edges: dict
    arrows: dict

    def neighbours(self, i: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == i} | {a for a, b in self.edges if b == i})

    def path(self, i: int, j: int) -> list[int]:
        """Shortest path from i to j, endpoints included."""
        prev = {i: None}
        queue = deque([i])
        while queue:
            a = queue.popleft()
            if a == j:
                break
            for b in self.neighbours(a):
                if b not in prev:
                    prev[b] = a
                    queue.append(b)
        if j not in prev:
            raise RootSystemError(f"nodes {i} and {j} are not connected")
        out = [j]
        while out[-1] != i:
            out.append(prev[out[-1]])
        return out[::-1]


def diagram_from_roots(labelled: dict[int, Root]) -> DynkinDiagram:
    edges, arrows = {}, {}
    for a, b in itertools.combinations(sorted(labelled), 2):
        ra, rb = labelled[a], labelled[b]
        ab = dot(ra, rb)
        if ab == 0:
            continue
        na, nb = dot(ra, ra), dot(rb, rb)
        mult = (4 * ab * ab) // (na * nb)
        edges[(a, b)] = mult
        if na != nb:
            arrows[(a, b) if na > nb else (b, a)] = True
    return DynkinDiagram(tuple(sorted(labelled)), dict(labelled), edges, arrows)


@dataclass(frozen=True, eq=False)
class RootSystem:
    family: str
    rank: int
    roots: frozenset = field(repr=False)
    simple: tuple = field(repr=False)
    highest_root: Root = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, RootSystem) and (self.family, self.rank) == (other.family, other.rank)

    def __hash__(self):
        return hash((self.family, self.rank))

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def dim(self) -> int:
        return ambient_dim(self.family, self.rank)

    @cached_property
    def _coeffs(self) -> dict[Root, tuple[int, ...]]:
        out = {}
        for r in self.roots:
            c = solve_coordinates(self.simple, r)
            out[r] = tuple(int(x) for x in c)
        return out

    def coefficients(self, root: Root) -> tuple[int, ...]:
        """Coordinates of a root over the simple roots (index 0 is alpha_1)."""
        return self._coeffs[tuple(root)]

    def simple_root(self, i: int) -> Root:
        return self.simple[i - 1]

    def is_root(self, v: Sequence[int]) -> bool:
        return tuple(v) in self.roots

    @cached_property
    def positive_roots(self) -> frozenset:
        return frozenset(r for r in self.roots if sum(self.coefficients(r)) > 0)

    def reflect(self, alpha: Root, v: Root) -> Root:
        c = (2 * dot(v, alpha)) // dot(alpha, alpha)
        return tuple(x - c * a for x, a in zip(v, alpha))

    def diagram(self, extended: bool = False) -> DynkinDiagram:
        labelled = {i + 1: r for i, r in enumerate(self.simple)}
        if extended:
            labelled[0] = neg(self.highest_root)
        return diagram_from_roots(labelled)

    def full(self) -> "Subsystem":
        return Subsystem(self, frozenset(self.roots), tuple(self.simple))

    def empty(self) -> "Subsystem":
        return Subsystem(self, frozenset(), ())


_CACHE: dict[tuple[str, int], RootSystem] = {}


def build_root_system(family: str, rank_: int) -> RootSystem:
    family = family.upper()
    if family not in FAMILIES:
        raise RootSystemError(f"unsupported family {family!r}")
    if rank_ < 1 or (family == "D" and rank_ < 2):
        raise RootSystemError(f"unsupported rank {rank_} for type {family}")
    key = (family, rank_)
    if key not in _CACHE:
        roots, simple = _roots_and_simple(family, rank_)
        rs = RootSystem(family, rank_, frozenset(roots), tuple(simple), ())
        highest = max(rs.roots, key=lambda r: (sum(rs.coefficients(r)), rs.coefficients(r)))
        object.__setattr__(rs, "highest_root", highest)
        _CACHE[key] = rs
    return _CACHE[key]


# -- subsystems ---------------------------------------------------------------


def _generic_functional(m: int) -> list[int]:
    # distinct positive weights: nonzero on every root of every classical type
    return list(range(m, 0, -1))


def simple_system(roots: Iterable[Root], m: int) -> tuple[Root, ...]:
    """A base for a root (sub)system: indecomposable positive roots."""
    f = _generic_functional(m)
    pos = [r for r in roots if dot(f, r) > 0]
    posset = set(pos)
    base = []
    for r in pos:
        decomposable = any(
            tuple(a - b for a, b in zip(r, s)) in posset for s in pos if s != r
        )
        if not decomposable:
            base.append(r)
    return tuple(sorted(base, key=lambda r: [-x for x in r]))


def canonical_type(family: str, rank_: int) -> tuple[str, int]:
    if rank_ == 1:
        return ("A", 1)
    if (family, rank_) == ("D", 3):
        return ("A", 3)
    if (family, rank_) == ("C", 2):
        return ("B", 2)
    return (family, rank_)


def _component_type(roots: list[Root], r: int) -> tuple[str, int]:
    norms = Counter(dot(x, x) for x in roots)
    n = len(roots)
    if len(norms) == 1:
        if n == r * (r + 1):
            return canonical_type("A", r)
        if n == 2 * r * (r - 1):
            return canonical_type("D", r)
        raise RootSystemError(f"unrecognised simply-laced component of rank {r} with {n} roots")
    if len(norms) != 2 or n != 2 * r * r:
        raise RootSystemError(f"unrecognised component of rank {r} with {n} roots")
    short = norms[min(norms)]
    if r == 2:
        return ("B", 2)
    if short == 2 * r:
        return ("B", r)
    return ("C", r)


def format_type(types: Iterable[tuple[str, int]]) -> str:
    types = list(types)
    return "".join(f"{f}{r}" for f, r in types) if types else "0"


@dataclass(frozen=True, eq=False)
class Subsystem:
    ambient: RootSystem
    roots: frozenset
    base: tuple = ()

    def __eq__(self, other):
        return isinstance(other, Subsystem) and self.ambient == other.ambient and self.roots == other.roots

    def __hash__(self):
        return hash((self.ambient, self.roots))

    def __len__(self):
        return len(self.roots)

    def __and__(self, other: "Subsystem") -> "Subsystem":
        if self.ambient != other.ambient:
            raise RootSystemError("subsystems of different ambient systems")
        return Subsystem(self.ambient, self.roots & other.roots, ())

    def is_closed(self) -> bool:
        if any(neg(r) not in self.roots for r in self.roots):
            return False
        for a, b in itertools.combinations(self.roots, 2):
            s = add(a, b)
            if self.ambient.is_root(s) and s not in self.roots:
                return False
        return True

    @cached_property
    def simple_roots(self) -> tuple[Root, ...]:
        return simple_system(self.roots, self.ambient.dim)

    @cached_property
    def rank(self) -> int:
        return rank(self.simple_roots)

    @cached_property
    def components(self) -> list[tuple[tuple[Root, ...], list[Root]]]:
        """Irreducible components as (base, roots) pairs."""
        base = list(self.simple_roots)
        parent = list(range(len(base)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, j in itertools.combinations(range(len(base)), 2):
            if dot(base[i], base[j]) != 0:
                parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(len(base)):
            groups.setdefault(find(i), []).append(i)
        comps = []
        for idx in groups.values():
            cb = tuple(base[i] for i in idx)
            croots = [r for r in self.roots if any(dot(r, b) != 0 for b in cb)]
            comps.append((cb, croots))
        return comps

    @cached_property
    def type_decomposition(self) -> tuple[tuple[str, int], ...]:
        return classify_subsystem(self)

    @property
    def type_name(self) -> str:
        return format_type(self.type_decomposition)

    def to_json(self) -> dict:
        types = self.type_decomposition
        fam = format_type(types)
        return {
            "family": fam,
            "rank": self.rank,
            "base": [list(b) for b in (self.base or self.simple_roots)],
            "roots": [list(r) for r in sorted(self.roots)],
        }


def subsystem(ambient: RootSystem, roots: Iterable[Root], base: Sequence[Root] = ()) -> Subsystem:
    return Subsystem(ambient, frozenset(tuple(r) for r in roots), tuple(tuple(b) for b in base))


def closed_hull(ambient: RootSystem, base: Iterable[Sequence[int]]) -> Subsystem:
    """All roots of the ambient system lying in the Z-span of ``base``."""
    base = [tuple(b) for b in base]
    for b in base:
        if b not in ambient.roots:
            raise RootSystemError(f"{b} is not a root of {ambient.name}")
    if rank(base) != len(base):
        raise RootSystemError("base is not linearly independent")
    if not base:
        return ambient.empty()
    span = RationalSpan(base)
    roots = []
    for r in ambient.roots:
        if r not in span:
            continue
        c = solve_coordinates(base, r)
        if all(x.denominator == 1 for x in c):
            roots.append(r)
    return Subsystem(ambient, frozenset(roots), tuple(base))


def classify_subsystem(s: Subsystem) -> tuple[tuple[str, int], ...]:
    """Irreducible components of a closed subsystem as a sorted multiset."""
    if not s.is_closed():
        raise RootSystemError("subset is not a closed root subsystem")
    return tuple(sorted(_component_type(roots, len(b)) for b, roots in s.components))


def dim_subsystem(s: Subsystem) -> int:
    """Dimension of H/Z(H) for a reductive H with root system s."""
    if not s.roots:
        return 0
    return len(s.roots) + rank(s.roots)


def sum_over_path(diagram: DynkinDiagram, i: int, j: int, ambient: RootSystem | None = None) -> Root:
    nodes = diagram.path(i, j)
    total = tuple(sum(xs) for xs in zip(*(diagram.roots[k] for k in nodes)))
    if ambient is not None and not ambient.is_root(total):
        raise RootSystemError(f"sum over path {i}..{j} is not a root")
    return total


def path_sum(ambient: RootSystem, i: int, j: int) -> Root:
    return sum_over_path(ambient.diagram(), i, j, ambient)


def is_levi_subsystem(s: Subsystem) -> bool:
    if not s.roots:
        return True
    span = RationalSpan(s.roots)
    return all((r in s.roots) == (r in span) for r in s.ambient.roots)


def standard_levi(ambient: RootSystem, nodes: Iterable[int]) -> Subsystem:
    return closed_hull(ambient, [ambient.simple_root(i) for i in sorted(nodes)])


# -- Weyl group ---------------------------------------------------------------


@dataclass(frozen=True)
class WeylElement:
    """Signed permutation: coordinate i of x goes to slot perm[i] with sign signs[i]."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __call__(self, v: Sequence[int]) -> Root:
        out = [0] * len(v)
        for i, x in enumerate(v):
            out[self.perm[i]] = self.signs[i] * x
        return tuple(out)

    def apply(self, s: Subsystem) -> Subsystem:
        return Subsystem(s.ambient, frozenset(self(r) for r in s.roots), tuple(self(b) for b in s.base))

    @classmethod
    def identity(cls, m: int) -> "WeylElement":
        return cls(tuple(range(m)), (1,) * m)

    def is_valid(self, family: str) -> bool:
        if family == "A":
            return all(s == 1 for s in self.signs)
        if family == "D":
            return self.signs.count(-1) % 2 == 0
        return True


def _match_columns(family: str, src: list[Root], dst: list[Root], m: int) -> WeylElement | None:
    """Signed permutation w in W(family) with w(src[k]) = dst[k] for all k."""
    cols_s = [tuple(v[i] for v in src) for i in range(m)]
    cols_d = [tuple(v[i] for v in dst) for i in range(m)]
    signed = family != "A"

    def key(c):
        return max(c, neg(c)) if signed else c

    buckets: dict[tuple, list[int]] = {}
    for j, c in enumerate(cols_d):
        buckets.setdefault(key(c), []).append(j)
    signs = [1] * m
    perm = [-1] * m
    used = [False] * m
    for i, c in enumerate(cols_s):
        for j in buckets.get(key(c), []):
            if not used[j] and cols_d[j] == c:
                perm[i], signs[i], used[j] = j, 1, True
                break
    for i, c in enumerate(cols_s):
        if perm[i] >= 0:
            continue
        if not signed:
            return None
        for j in buckets.get(key(c), []):
            if not used[j] and cols_d[j] == neg(c):
                perm[i], signs[i], used[j] = j, -1, True
                break
        else:
            return None
    if family == "D" and signs.count(-1) % 2:
        zero = next((i for i, c in enumerate(cols_s) if not any(c)), None)
        if zero is None:
            return None
        signs[zero] = -signs[zero]
    return WeylElement(tuple(perm), tuple(signs))


def _base_bijections(b1: Sequence[Root], b2: Sequence[Root]):
    """Bijections b1 -> b2 preserving all inner products (backtracking)."""
    k = len(b1)
    chosen: list[int] = []

    def rec():
        i = len(chosen)
        if i == k:
            yield [b2[j] for j in chosen]
            return
        for j in range(k):
            if j in chosen or dot(b1[i], b1[i]) != dot(b2[j], b2[j]):
                continue
            if all(dot(b1[i], b1[t]) == dot(b2[j], b2[chosen[t]]) for t in range(i)):
                chosen.append(j)
                yield from rec()
                chosen.pop()

    yield from rec()


def weyl_conjugate(s1: Subsystem, s2: Subsystem) -> tuple[bool, WeylElement | None]:
    """Decide whether some Weyl group element maps s1 onto s2.

    Any such element carries a base of s1 to a base of s2, and the bases of s2
    are permuted transitively by W(s2), so it suffices to match the computed
    simple systems up to an isometric relabelling.
    """
    if s1.ambient != s2.ambient:
        raise RootSystemError("subsystems of different ambient systems")
    G = s1.ambient
    m = G.dim
    if len(s1.roots) != len(s2.roots):
        return False, None
    if not s1.roots:
        return True, WeylElement.identity(m)
    if Counter(dot(r, r) for r in s1.roots) != Counter(dot(r, r) for r in s2.roots):
        return False, None
    b1, b2 = list(s1.simple_roots), list(s2.simple_roots)
    if len(b1) != len(b2):
        return False, None
    for image in _base_bijections(b1, b2):
        w = _match_columns(G.family, b1, image, m)
        if w is not None and w.is_valid(G.family):
            if frozenset(w(r) for r in s1.roots) == s2.roots:
                return True, w
    return False, None


def weyl_orbit(s: Subsystem) -> list[Subsystem]:
    """All W-conjugates of s (breadth-first under simple reflections), sorted."""
    G = s.ambient
    start = s.roots
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for a in G.simple:
            img = frozenset(G.reflect(a, r) for r in cur)
            if img not in seen:
                seen.add(img)
                queue.append(img)
    return [Subsystem(G, rs, ()) for rs in sorted(seen, key=lambda x: sorted(x))]
