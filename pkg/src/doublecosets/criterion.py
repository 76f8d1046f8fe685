"""Infiniteness certificates from conjugate Levi subsystems.

For Levi subsystems Phi1, Phi2 of G that are W-conjugate, the quantity

    1/2 dim Phi1 - dim(Phi1 & Phi(X)) - 1/2 dim(Phi2 & Phi(L))

being positive forces X\\G/P to be infinite.  Here dim of a closed subsystem
is |roots| + rank (the dimension of the corresponding group modulo centre).

Measured that way ("semisimple" convention) the quantity is not a sound
certificate: in D_4 it is 7/2 for X = L_{2,3}, P = P_4, a finite case.  The
search therefore certifies with the "levi" convention, where every term is a
dimension inside L_i modulo its centre, i.e. |psi| + rank(Phi_i).  This is the
honest orbit-dimension count and still gives 1 on both standard patterns.

The value only depends on Phi1 through Phi1 & Phi(X) and on Phi2 through
Phi2 & Phi(L), so for each W-orbit of Levi subsystems we independently
minimize both intersections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .rootsys import (
    RootSystem,
    Subsystem,
    closed_hull,
    is_levi_subsystem,
    path_sum,
    simple_system,
    standard_levi,
    weyl_conjugate,
    weyl_orbit,
)
from .subgroups import (
    ParabolicSpec,
    SubgroupSpec,
    Verdict,
    classify_finiteness,
    enumerate_maximal_rank_subgroups,
    is_spherical,
    levi_spec,
    levi_subsystem,
    maximal_parabolics,
    subsystem_of_X,
)

STRATEGIES = ("lemma", "b2a3", "full")
_ALIASES = {"lemma-bases": "lemma", "exhaustive-B2-A3": "b2a3"}


class SearchBoundExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Witness:
    phi1: Subsystem
    phi2: Subsystem
    value: Fraction  # certified margin, levi convention
    source: str = ""

    def to_json(self) -> dict:
        return {
            "phi1_base": [list(r) for r in self.phi1.base],
            "phi2_base": [list(r) for r in self.phi2.base],
            "phi1_type": self.phi1.type_name,
            "value": str(self.value),
            "source": self.source,
        }


@dataclass
class CriterionReport:
    verdict: str  # InfiniteWitnessed, NoWitnessFound, PrefilteredInfinite
    witness: Witness | None = None
    search_space_size: int = 0

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness.to_json() if self.witness else None,
            "search_space_size": self.search_space_size,
        }


def _roots_dim(roots: frozenset, m: int) -> int:
    if not roots:
        return 0
    return len(roots) + len(simple_system(roots, m))


_dim_cache: dict = {}


def _dim(roots: frozenset, m: int) -> int:
    d = _dim_cache.get(roots)
    if d is None:
        d = _dim_cache[roots] = _roots_dim(roots, m)
    return d


CONVENTIONS = ("semisimple", "levi")


def criterion_value(
    phi1: Subsystem,
    phi2: Subsystem,
    phiX: Subsystem,
    phiL: Subsystem,
    convention: str = "semisimple",
) -> Fraction:
    """1/2 dim Phi1 - dim(Phi1 & Phi(X)) - 1/2 dim(Phi2 & Phi(L)), exactly."""
    G = phi1.ambient
    if not (phi2.ambient == phiX.ambient == phiL.ambient == G):
        raise ValueError("subsystems of different ambient systems")
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    m = G.dim
    i1, i2 = phi1.roots & phiX.roots, phi2.roots & phiL.roots
    if convention == "semisimple":
        return Fraction(_dim(phi1.roots, m), 2) - _dim(i1, m) - Fraction(_dim(i2, m), 2)
    r1, r2 = _rank(phi1.roots, m), _rank(phi2.roots, m)
    return Fraction(len(phi1.roots) + r1, 2) - (len(i1) + r1) - Fraction(len(i2) + r2, 2)


def _rank(roots: frozenset, m: int) -> int:
    return _dim(roots, m) - len(roots)


def prefilter_theorem41(G: RootSystem, X: SubgroupSpec, P: ParabolicSpec) -> Verdict | None:
    if is_spherical(G, X) or is_spherical(G, levi_spec(G, P)):
        return None
    return Verdict("Infinite", "Theorem 4.1: neither X nor L spherical")


# -- Levi orbits ----------------------------------------------------------------------


@lru_cache(maxsize=None)
def levi_orbits(G: RootSystem, types: tuple[str, ...] | None = None) -> tuple[tuple[frozenset, ...], ...]:
    """W-orbits of nonempty Levi subsystems (G itself included), optionally by type name."""
    seen: set = set()
    orbits = []
    n = G.rank
    for k in range(1, n + 1):
        for J in combinations(range(1, n + 1), k):
            s = standard_levi(G, J)
            if types is not None and s.type_name not in types:
                continue
            if s.roots in seen:
                continue
            orb = tuple(o.roots for o in weyl_orbit(s))
            seen.update(orb)
            orbits.append(orb)
    return tuple(orbits)


def _base_key(roots: frozenset, m: int):
    return tuple(sorted(simple_system(roots, m)))


def _best_in_orbit(orbit, target: frozenset, m: int) -> tuple[int, frozenset]:
    best = None
    for rs in orbit:
        d = len(rs & target)
        if best is None or d < best[0] or (d == best[0] and _base_key(rs, m) < _base_key(best[1], m)):
            best = (d, rs)
    return best


def _search(G: RootSystem, phiX: Subsystem, phiL: Subsystem, orbits, source: str):
    m = G.dim
    found = []
    size = 0
    for orb in orbits:
        size += len(orb)
        r = _rank(orb[0], m)
        top = Fraction(len(orb[0]), 2) - r
        if top <= 0:
            continue
        nx, r1 = _best_in_orbit(orb, phiX.roots, m)
        if top - nx <= 0:
            continue
        nl, r2 = _best_in_orbit(orb, phiL.roots, m)
        value = top - nx - Fraction(nl, 2)
        if value > 0:
            phi1 = Subsystem(G, r1, tuple(simple_system(r1, m)))
            phi2 = Subsystem(G, r2, tuple(simple_system(r2, m)))
            found.append(Witness(phi1, phi2, value, source))
    return _pick(found), size


def _pick(found: list[Witness]) -> Witness | None:
    if not found:
        return None
    return min(found, key=lambda w: (-w.value, sorted(w.phi1.base), sorted(w.phi2.base)))


# -- explicit constructions -------------------------------------------------------------


def _gl_blocks(X: SubgroupSpec) -> list[int]:
    return [b.size for b in X.blocks if b.kind in ("GL", "T")]


def lemma_bases(G: RootSystem, X: SubgroupSpec, P: ParabolicSpec):
    """Explicit (Phi1 base, Phi2 base, label) for the cases with written-out bases."""
    if not P.is_maximal():
        return None
    n, i = G.rank, P.node
    a = lambda k: G.simple_root(k)
    if G.family == "A":
        sizes = _gl_blocks(X)
        if len(sizes) != 4 or not 2 <= i <= n - 1:
            return None
        n1, n2, n3, _ = (s - 1 for s in sizes)
        b1 = [a(n1 + 1), path_sum(G, n1 + 2, n1 + n2 + 2), path_sum(G, n1 + n2 + 3, n1 + n2 + n3 + 3)]
        b2 = [a(i - 1), a(i), a(i + 1)]
        return b1, b2, "A_n four linear blocks"
    if G.family == "D" and n >= 4 and i in (n - 1, n):
        gl = X.gl_sizes()
        if len(gl) != 2 or X.sizes("D") or min(gl) < 2:
            return None
        k = X.blocks[0].size  # X is L_{k,n} (class +) or L_{k,n-1} (class -)
        cls = X.dn_class or "+"
        if n == 4 and ((cls == "-" and i == 4) or (cls == "+" and i == 3)):
            return None
        if cls == "+" and i == n:
            b = [path_sum(G, 1, n - 1), a(n), path_sum(G, 2, n - 2)]
            return b, b, "D_n L_{i,n} with P_n"
        if cls == "-" and i == n - 1:
            # image of the previous case under the graph automorphism
            b = [_flip_last(r) for r in (path_sum(G, 1, n - 1), a(n), path_sum(G, 2, n - 2))]
            return b, b, "D_n L_{i,n-1} with P_{n-1}"
        if k <= n - 3:
            b = [path_sum(G, k, n - 3), _add3(a(n - 2), a(n - 1), a(n)), path_sum(G, k - 1, n - 2)]
            return b, b, "D_n L_{i,n-1} with P_n" if cls == "-" else "D_n L_{i,n} with P_{n-1}"
    return None


def _flip_last(r):
    return tuple(r[:-1]) + (-r[-1],)


def _add3(x, y, z):
    return tuple(p + q + s for p, q, s in zip(x, y, z))


# which restricted family of Levi types covers each remaining Table 3 case
_LEMMA_TYPES = {"B": ("B2",), "C": ("B2", "A3"), "D": ("A3",), "A": ("A3",)}


def find_witness(
    G: RootSystem,
    X: SubgroupSpec,
    P: ParabolicSpec,
    strategy: str = "b2a3",
    rank_bound: int = 6,
    with_size: bool = False,
):
    """Search for a positive criterion witness.

    Strategies are cumulative: ``lemma`` tries the explicit constructions,
    ``b2a3`` then searches every Levi orbit of type B_2 or A_3/D_3, and
    ``full`` then searches every Levi orbit.
    """
    strategy = _ALIASES.get(strategy, strategy)
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    phiX = subsystem_of_X(G, X)
    phiL = levi_subsystem(G, P)
    size = 0
    result = None
    lb = lemma_bases(G, X, P)
    if lb is not None:
        b1, b2, label = lb
        phi1, phi2 = closed_hull(G, b1), closed_hull(G, b2)
        size += 1
        v = criterion_value(phi1, phi2, phiX, phiL, "levi")
        if v > 0 and weyl_conjugate(phi1, phi2)[0]:
            result = Witness(phi1, phi2, v, f"lemma: {label}")
    if result is None and strategy == "lemma" and not is_spherical(G, X):
        result, s = _search(G, phiX, phiL, levi_orbits(G, _LEMMA_TYPES[G.family]), "lemma: typed search")
        size += s
    if result is None and strategy in ("b2a3", "full"):
        result, s = _search(G, phiX, phiL, levi_orbits(G, ("B2", "A3")), "b2a3")
        size += s
    if result is None and strategy == "full":
        if G.rank > rank_bound:
            raise SearchBoundExceeded(f"full search limited to rank {rank_bound}, got {G.rank}")
        result, s = _search(G, phiX, phiL, levi_orbits(G, None), "full")
        size += s
    return (result, size) if with_size else result


def analyse(G: RootSystem, X: SubgroupSpec, P: ParabolicSpec, strategy: str = "b2a3") -> CriterionReport:
    if prefilter_theorem41(G, X, P) is not None:
        return CriterionReport("PrefilteredInfinite", None, 0)
    w, size = find_witness(G, X, P, strategy, with_size=True)
    return CriterionReport("InfiniteWitnessed" if w else "NoWitnessFound", w, size)


def check_witness(w: Witness) -> bool:
    return (
        is_levi_subsystem(w.phi1)
        and is_levi_subsystem(w.phi2)
        and weyl_conjugate(w.phi1, w.phi2)[0]
        and w.value > 0
    )


# -- table verification ---------------------------------------------------------------------


@dataclass
class TableReport:
    rank_bound: int
    finite_checked: int = 0
    infinite_checked: int = 0
    soundness_violations: list = field(default_factory=list)
    completeness_failures: list = field(default_factory=list)
    witness_sources: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.soundness_violations and not self.completeness_failures

    def to_json(self) -> dict:
        return {
            "rank_bound": self.rank_bound,
            "finite_checked": self.finite_checked,
            "infinite_checked": self.infinite_checked,
            "soundness_violations": self.soundness_violations,
            "completeness_failures": self.completeness_failures,
            "witness_sources": self.witness_sources,
        }


def groups_up_to(rank_bound: int) -> list[RootSystem]:
    from .rootsys import build_root_system

    out = []
    for fam, lo in (("A", 1), ("B", 2), ("C", 2), ("D", 4)):
        out += [build_root_system(fam, n) for n in range(lo, rank_bound + 1)]
    return out


def verify_table(rank_bound: int, strategy: str = "b2a3") -> TableReport:
    """Soundness on Finite cases and completeness on the infiniteness table."""
    from .tables import finite_instances, infinite_instances

    if rank_bound > 8:
        raise ValueError("rank_bound must be at most 8")
    rep = TableReport(rank_bound)
    for G in groups_up_to(rank_bound):
        finite = {(X, P): c for X, P, c in finite_instances(G)}
        for X, _ in enumerate_maximal_rank_subgroups(G):
            for P in maximal_parabolics(G):
                v = classify_finiteness(G, X, P)
                if v.finite:
                    finite.setdefault((X, P), v.provenance)
        for (X, P), clause in sorted(finite.items(), key=lambda t: (t[0][0].label(), t[0][1].nodes)):
            rep.finite_checked += 1
            w = find_witness(G, X, P, strategy)
            if w is not None:
                rep.soundness_violations.append(
                    {"group": G.name, "X": X.label(), "P": P.label(), "clause": clause, "witness": w.to_json()}
                )
        for X, P, row in infinite_instances(G):
            rep.infinite_checked += 1
            w = find_witness(G, X, P, strategy)
            if w is None or not check_witness(w):
                rep.completeness_failures.append({"group": G.name, "X": X.label(), "P": P.label(), "row": row})
            else:
                src = w.source
                rep.witness_sources[src] = rep.witness_sources.get(src, 0) + 1
    return rep
