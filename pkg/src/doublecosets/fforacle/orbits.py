"""Orbit counts of X(F_q) on G(F_q)/P and the growth-vs-boundedness test."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..rootsys import RootSystem
from ..subgroups import ParabolicSpec, SubgroupSpec
from .flags import (
    DEFAULT_BUDGET,
    Budget,
    BudgetExceeded,
    FlagSet,
    canonical,
    enumerate_flags,
    expected_flag_count,
)
from .groups import EmbeddingError, MatrixGroupInstance, build_subgroup_instance
from .spaces import build_formed_space


@dataclass
class OrbitReport:
    q: int
    point_count: int
    orbit_count: int
    orbit_sizes: list[int]
    group: str = ""

    def to_json(self) -> dict:
        return {"q": self.q, "points": self.point_count, "orbits": self.orbit_count, "sizes": self.orbit_sizes}


def orbit_labels(group: MatrixGroupInstance, flags: FlagSet) -> np.ndarray:
    """Component label of each flag under the generated group."""
    N = len(flags)
    src, dst = [], []
    for g in group.generators:
        idx = flags.permutation(g)
        if (idx < 0).any():
            raise EmbeddingError(f"generator of {group.label} does not preserve the flag set")
        src.append(np.arange(N))
        dst.append(idx)
    if not src:
        return np.arange(N)
    s, d = np.concatenate(src), np.concatenate(dst)
    graph = coo_matrix((np.ones(len(s), dtype=np.int8), (s, d)), shape=(N, N)).tocsr()
    _, labels = connected_components(graph, directed=True, connection="weak")
    return labels


def count_orbits(group: MatrixGroupInstance, flags: FlagSet) -> OrbitReport:
    labels = orbit_labels(group, flags)
    sizes = sorted(np.bincount(labels).tolist()) if len(labels) else []
    return OrbitReport(flags.space.q, len(flags), len(sizes), sizes, group.label)


@lru_cache(maxsize=8)
def _cached_flags(family: str, n: int, q: int, P: ParabolicSpec, max_flags: int, max_seconds: float) -> FlagSet:
    space = build_formed_space(family, n, q)
    return enumerate_flags(space, P, Budget(max_flags, max_seconds))


def orbit_count(G: RootSystem, X: SubgroupSpec, P: ParabolicSpec, q: int,
                budget: Budget = DEFAULT_BUDGET) -> OrbitReport:
    space = build_formed_space(G.family, G.rank, q)
    if expected_flag_count(space, P) > budget.max_flags:
        raise BudgetExceeded(f"{expected_flag_count(space, P)} flags exceed budget {budget.max_flags}")
    flags = _cached_flags(G.family, G.rank, q, P, budget.max_flags, budget.max_seconds)
    inst = build_subgroup_instance(flags.space, X)
    t0 = time.monotonic()
    rep = count_orbits(inst, flags)
    if time.monotonic() - t0 > budget.max_seconds:
        raise BudgetExceeded(f"orbit count exceeded {budget.max_seconds}s")
    return rep


@dataclass
class Evidence:
    verdict: str  # Bounded, Growing, Inconclusive
    q_list: list[int]
    counts: list[int | None]
    notes: list[str] = field(default_factory=list)
    group: str = "connected (GL/Sp/SO)"

    @property
    def partial(self) -> bool:
        return any(c is None for c in self.counts)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "q": self.q_list, "counts": self.counts,
                "notes": self.notes, "realized_as": self.group}


def judge(counts: list[int]) -> str:
    """Growing if strictly increasing; Bounded if flat within a factor 2 from the second entry on."""
    if len(counts) < 2:
        return "Inconclusive"
    if all(a < b for a, b in zip(counts, counts[1:])):
        return "Growing"
    tail = counts[1:]
    if max(tail) <= 2 * min(tail):
        return "Bounded"
    return "Inconclusive"


def stabilization_test(G: RootSystem, X: SubgroupSpec, P: ParabolicSpec, q_list,
                       budget: Budget = DEFAULT_BUDGET) -> Evidence:
    q_list = list(q_list)
    if q_list != sorted(q_list):
        raise ValueError("q_list must be ascending")
    counts: list[int | None] = []
    notes = []
    for q in q_list:
        try:
            counts.append(orbit_count(G, X, P, q, budget).orbit_count)
        except BudgetExceeded as exc:
            counts.append(None)
            notes.append(f"q={q}: {exc}")
    done = [c for c in counts if c is not None]
    verdict = judge(done) if len(done) == len(counts) else "Inconclusive"
    return Evidence(verdict, q_list, counts, notes)
