"""Matrix generators for G(F_q) and its maximal rank subgroups X(F_q).

Matrices act on column vectors.  A subgroup is generated by the root
elements x_beta(1), beta in +-Delta(X), together with the diagonal torus
elements h_a(omega) for a primitive omega.  Taking X = G gives the groups
GL, Sp and the connected orthogonal group, never the full O(V): the full
orthogonal group fuses the two classes of maximal subspaces in type D.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..rootsys import RootSystem, build_root_system, neg
from ..subgroups import SubgroupSpec, subsystem_of_X
from .spaces import FormedSpace


class EmbeddingError(ValueError):
    pass


@dataclass(eq=False)
class MatrixGroupInstance:
    space: FormedSpace
    generators: list[np.ndarray]
    label: str
    connected: bool = True

    def preserves_forms(self) -> bool:
        return all(preserves_form(self.space, g) for g in self.generators)

    def order(self, limit: int = 10**6) -> int:
        return closure_order(self.generators, self.space.q, limit)


def _weight_vector(space: FormedSpace, i: int, s: int) -> int:
    """Coordinate of the weight vector of weight s*eps_i (s = +-1)."""
    return space.e(i + 1) if s > 0 else space.f(i + 1)


def root_element(space: FormedSpace, root, t: int = 1) -> np.ndarray:
    """x_root(t) in the standard realization."""
    q, m = space.q, space.dimension
    M = np.eye(m, dtype=np.int64)
    sup = [(i, c) for i, c in enumerate(root) if c]
    if space.family == "A":
        (i, a), (j, b) = sup if sup[0][1] > 0 else sup[::-1]
        M[i, j] = t % q
        return M
    B = space.bilinear

    def bet(x, y):
        return int(B[x, y])

    if len(sup) == 2:
        (i, s), (j, r) = sup
        src_j, dst_i = _weight_vector(space, j, -r), _weight_vector(space, i, s)
        src_i, dst_j = _weight_vector(space, i, -s), _weight_vector(space, j, r)
        c = (-bet(dst_i, src_i) * pow(bet(src_j, dst_j), -1, q)) % q
        M[dst_i, src_j] = (M[dst_i, src_j] + t) % q
        M[dst_j, src_i] = (M[dst_j, src_i] + c * t) % q
        return M
    (i, s), = sup
    if abs(s) == 2:  # long root of C_n
        M[_weight_vector(space, i, s), _weight_vector(space, i, -s)] = t % q
        return M
    if space.family != "B":
        raise EmbeddingError(f"short root {root} outside type B")
    up, down, d = _weight_vector(space, i, s), _weight_vector(space, i, -s), space.d
    M[up, d] = (-2 * t) % q
    M[d, down] = t % q
    M[up, down] = (-t * t) % q
    return M


def torus_element(space: FormedSpace, i: int, w: int) -> np.ndarray:
    q = space.q
    M = np.eye(space.dimension, dtype=np.int64)
    M[space.e(i + 1), space.e(i + 1)] = w % q
    if space.family != "A":
        M[space.f(i + 1), space.f(i + 1)] = pow(w, -1, q)
    return M


def preserves_form(space: FormedSpace, g: np.ndarray) -> bool:
    q = space.q
    if space.family == "A":
        return round(np.linalg.det(g)) % q != 0
    if not (((g.T @ space.bilinear @ g) - space.bilinear) % q == 0).all():
        return False
    if space.quadratic is not None:
        for v in np.eye(space.dimension, dtype=np.int64):
            if space.Q(g @ v) != space.Q(v):
                return False
        for a in range(space.dimension):
            for b in range(a + 1, space.dimension):
                v = np.zeros(space.dimension, dtype=np.int64)
                v[a] = v[b] = 1
                if space.Q(g @ v) != space.Q(v):
                    return False
    return True


def _ambient(space: FormedSpace) -> RootSystem:
    return build_root_system(space.family, space.n)


def build_group_instance(space: FormedSpace, simple_roots, label: str) -> MatrixGroupInstance:
    gens = []
    seen = set()
    for b in simple_roots:
        for r in (tuple(b), neg(b)):
            if r not in seen:
                seen.add(r)
                gens.append(root_element(space, r))
    w = space.field.primitive
    if w != 1:
        torus_rank = space.n + 1 if space.family == "A" else space.n
        gens += [torus_element(space, i, w) for i in range(torus_rank)]
    return MatrixGroupInstance(space, gens, label)


def build_full_group(space: FormedSpace) -> MatrixGroupInstance:
    G = _ambient(space)
    label = {"A": "GL", "B": "SO", "C": "Sp", "D": "SO"}[space.family]
    return build_group_instance(space, G.simple, f"{label}_{space.dimension}({space.q})")


def build_subgroup_instance(space: FormedSpace, X: SubgroupSpec) -> MatrixGroupInstance:
    G = _ambient(space)
    if X.ambient != (G.family, G.rank):
        raise EmbeddingError(f"{X.label()} is not a subgroup of {G.name}")
    phi = subsystem_of_X(G, X)
    return build_group_instance(space, phi.simple_roots, f"{X.label()} in {G.name}({space.q})")


def closure_order(gens: list[np.ndarray], q: int, limit: int = 10**6) -> int:
    """Order of the generated group by breadth-first closure (small groups only)."""
    if not gens:
        return 1
    m = gens[0].shape[0]
    ident = np.eye(m, dtype=np.int64)
    seen = {ident.tobytes()}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                k = (g @ h) % q
                key = k.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(k)
                    if len(seen) > limit:
                        raise RuntimeError(f"group order exceeds {limit}")
        frontier = nxt
    return len(seen)
