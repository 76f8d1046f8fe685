"""Checkable statements about decompositions V = V_1 + V_2 (orthogonal sum).

Quadruple statements are checked through the relation they constrain: the
statement "beta_1(u,v) = beta_1(x,y) iff beta_2(u,v) = beta_2(x,y) whenever
beta(u,v) = beta(x,y) = 0" holds for all quadruples exactly when the set of
pairs (beta_1(u,v), beta_2(u,v)) over all (u,v) with beta(u,v) = 0 is the
graph of an injective function.  Scanning all pairs is therefore exhaustive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..subgroups import make_parabolic
from ..rootsys import build_root_system
from .flags import Budget, canonical, enumerate_flags, keys_of, rref_batch
from .groups import MatrixGroupInstance, root_element, torus_element
from .spaces import FormedSpace, build_formed_space


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class PropertyReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))


def all_vectors(m: int, q: int) -> np.ndarray:
    return np.array(list(product(range(q), repeat=m)), dtype=np.int64)


def _pair_relation_ok(a: np.ndarray, b: np.ndarray) -> tuple[bool, str]:
    pairs = set(zip(a.tolist(), b.tolist()))
    lefts = {x for x, _ in pairs}
    rights = {y for _, y in pairs}
    ok = len(lefts) == len(pairs) == len(rights)
    return ok, f"relation {sorted(pairs)}"


def check_lemma_34_bilinear(space: FormedSpace, sample: int | None = None, rng=None) -> Check:
    q, m = space.q, space.dimension
    p1, p2 = space.projections()
    vecs = all_vectors(m, q)
    if sample is not None and len(vecs) ** 2 > sample:
        rng = rng or np.random.default_rng(0)
        u = vecs[rng.integers(0, len(vecs), sample)]
        v = vecs[rng.integers(0, len(vecs), sample)]
    else:
        iu, iv = np.meshgrid(np.arange(len(vecs)), np.arange(len(vecs)), indexing="ij")
        u, v = vecs[iu.ravel()], vecs[iv.ravel()]
    B = space.bilinear
    total = np.einsum("ni,ij,nj->n", u, B, v) % q
    keep = total == 0
    u, v = u[keep], v[keep]
    b1 = np.einsum("ni,ij,nj->n", u @ p1, B, v @ p1) % q
    b2 = np.einsum("ni,ij,nj->n", u @ p2, B, v @ p2) % q
    ok, detail = _pair_relation_ok(b1, b2)
    return Check(f"3.4(i) {space.family}{space.n} q={q} split={len(space.decomposition[0])}", ok, detail)


def check_lemma_34_quadratic(space: FormedSpace) -> Check:
    q, m = space.q, space.dimension
    p1, p2 = space.projections()
    vecs = all_vectors(m, q)
    Qv = space.Q_rows(vecs[:, None, :])[:, 0]
    sing = vecs[Qv == 0]
    a = space.Q_rows((sing @ p1)[:, None, :])[:, 0]
    b = space.Q_rows((sing @ p2)[:, None, :])[:, 0]
    rel = set(zip(a.tolist(), b.tolist()))
    ok = len({x for x, _ in rel}) == len(rel)
    return Check(f"3.4(ii) {space.family}{space.n} q={q} split={len(space.decomposition[0])}", ok, f"relation {sorted(rel)}")


def _rank_mod(A: np.ndarray, q: int, inv: np.ndarray) -> int:
    if A.shape[0] == 0:
        return 0
    R = _echelon(A % q, q, inv)
    return int((R != 0).any(axis=1).sum())


def _echelon(A, q, inv):
    A = A.copy() % q
    r, m = A.shape
    row = 0
    for c in range(m):
        piv = [i for i in range(row, r) if A[i, c]]
        if not piv:
            continue
        p = piv[0]
        A[[row, p]] = A[[p, row]]
        A[row] = (A[row] * inv[A[row, c]]) % q
        for i in range(r):
            if i != row and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[row]) % q
        row += 1
        if row == r:
            break
    return A


def maximal_singular_subspaces(space: FormedSpace) -> list[np.ndarray]:
    """All maximal totally singular subspaces (both classes in type D)."""
    if space.family == "D" and space.n < 2:
        raise ValueError("type D needs n >= 2")
    G = build_root_system(space.family, space.n)
    nodes = [[space.n - 1], [space.n]] if space.family == "D" else [[space.n]]
    out = []
    for ns in nodes:
        fs = enumerate_flags(space, make_parabolic(G, ns), Budget(10**6, 600))
        out += [fs.flags[i].astype(np.int64) for i in range(len(fs))]
    return out


def lasso_values(space: FormedSpace) -> list[int]:
    """dim (pi_i W)^perp - dim (W & V_i), perp taken within V_i, over all maximal W and i."""
    q, inv = space.q, space.field.inv
    p1, p2 = space.projections()
    V = (space.decomposition[0], space.decomposition[1])
    vals = []
    for W in maximal_singular_subspaces(space):
        for i, (pi, other) in enumerate(((p1, p2), (p2, p1))):
            Vi = list(V[i])
            proj = (W @ pi) % q
            # beta(pi_i w, v) for v in V_i: rows index w, columns index v
            M = (proj @ space.bilinear)[:, Vi] % q
            perp = len(Vi) - _rank_mod(M, q, inv)
            meet = W.shape[0] - _rank_mod((W @ other) % q, q, inv)
            vals.append(perp - meet)
    return vals


def check_lemma_37(space: FormedSpace) -> Check:
    vals = sorted(set(lasso_values(space)))
    allowed = {0} if space.dimension % 2 == 0 else {0, 1}
    ok = set(vals) <= allowed
    return Check(f"3.7 {space.family}{space.n} q={space.q} split={len(space.decomposition[0])}", ok, f"values {vals}")


# -- Lemma 3.5: reduction to X_1 ------------------------------------------------


def _classical_generators(space: FormedSpace, coords: list[int], full_orthogonal: bool) -> list[np.ndarray]:
    """Generators of Cl(V_i) for V_i spanned by hyperbolic pairs with indices ``coords``."""
    gens = []
    fam = space.family
    k = len(coords)
    if k == 0:
        return gens

    def vec(pairs):
        v = [0] * space.n
        for i, c in pairs:
            v[i] += c
        return tuple(v)

    roots = []
    for a in range(k - 1):
        roots.append(vec([(coords[a], 1), (coords[a + 1], -1)]))
    last = coords[-1]
    if fam == "C":
        roots.append(vec([(last, 2)]))
    elif fam == "D" and k >= 2:
        roots.append(vec([(coords[-2], 1), (last, 1)]))
    elif fam == "B":
        roots.append(vec([(last, 1)]))
    for r in roots:
        gens.append(root_element(space, r))
        gens.append(root_element(space, tuple(-x for x in r)))
    w = space.field.primitive
    if w != 1:
        gens += [torus_element(space, i, w) for i in coords]
    if full_orthogonal and fam == "D":
        # determinant -1 isometry: swap e_c and f_c
        s = np.eye(space.dimension, dtype=np.int64)
        c = coords[-1]
        e, f = space.e(c + 1), space.f(c + 1)
        s[[e, f]] = s[[f, e]]
        gens.append(s)
    return gens


def _components(N: int, edges: list[tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
    if not edges:
        return np.arange(N)
    s = np.concatenate([a for a, _ in edges])
    d = np.concatenate([b for _, b in edges])
    g = coo_matrix((np.ones(len(s), dtype=np.int8), (s, d)), shape=(N, N)).tocsr()
    return connected_components(g, directed=True, connection="weak")[1]


def _same_partition(a: np.ndarray, b: np.ndarray) -> bool:
    pairs = set(zip(a.tolist(), b.tolist()))
    return len(pairs) == len(set(a.tolist())) == len(set(b.tolist()))


def check_lemma_35(space: FormedSpace, k_dim: int, x1: str = "trivial") -> Check:
    """X = X_1 x Cl(V_2): X-orbits on t.s. k-spaces equal X_1-classes of (W & V_1, pi_1 W)."""
    q = space.q
    n1 = sum(1 for c in space.decomposition[0] if c < space.n)
    c1, c2 = list(range(n1)), list(range(n1, space.n))
    G = build_root_system(space.family, space.n)
    fs = enumerate_flags(space, make_parabolic(G, [k_dim]) if not (space.family == "D" and k_dim >= space.n - 1) else make_parabolic(G, [space.n - 1, space.n]), Budget(10**6, 600))
    if space.family == "D" and k_dim == space.n:
        raise ValueError("use k < n for type D")
    N = len(fs)
    gens2 = _classical_generators(space, c2, full_orthogonal=True)
    gens1 = [] if x1 == "trivial" else _classical_generators(space, c1, full_orthogonal=True)
    edges1 = [(np.arange(N), fs.permutation(g)) for g in gens1]
    edges2 = [(np.arange(N), fs.permutation(g)) for g in gens2]
    if any((e[1] < 0).any() for e in edges1 + edges2):
        return Check("3.5", False, "generator leaves the flag set")
    orbit = _components(N, edges1 + edges2)
    # key (W & V_1, pi_1 W), both as canonical echelon forms padded to fixed size
    p1, p2 = space.projections()
    keys = []
    m = space.dimension
    for i in range(N):
        W = fs.flags[i].astype(np.int64)
        P1 = _echelon((W @ p1) % q, q, space.field.inv)
        # W & V_1 = {w : pi_2 w = 0}: kernel of the projection, via echelon on [pi_2 W | W]
        aug = np.hstack([(W @ p2) % q, W])
        E = _echelon(aug, q, space.field.inv)
        meet = E[(E[:, :m] == 0).all(axis=1)][:, m:]
        meet = _echelon(meet, q, space.field.inv) if len(meet) else meet
        keys.append((P1.tobytes(), meet.tobytes()))
    _, key_id = np.unique(np.array([hash(k) for k in keys]), return_inverse=True)
    # identify equal keys, then close under X_1
    order = np.argsort(key_id, kind="stable")
    same = (order[:-1], order[1:])
    same_mask = key_id[order[:-1]] == key_id[order[1:]]
    edges_key = [(same[0][same_mask], same[1][same_mask])]
    classes = _components(N, edges1 + edges_key)
    ok = _same_partition(orbit, classes)
    return Check(f"3.5 {space.family}{space.n} q={q} n1={n1} k={k_dim} X1={x1}", ok,
                 f"{len(set(orbit.tolist()))} orbits, {len(set(classes.tolist()))} classes")


def definite_point_orbits(n: int, q: int) -> tuple[int, int]:
    """(orbits of GL_n on nonsingular 1-spaces of the split 2n-space, number of square classes hit)."""
    from ..subgroups import make_subgroup, FactorSpec
    from .groups import build_subgroup_instance
    from .orbits import orbit_labels

    space = build_formed_space("D", n, q)
    vecs = all_vectors(space.dimension, q)[1:]
    Qv = space.Q_rows(vecs[:, None, :])[:, 0]
    pts = vecs[Qv != 0]
    canon = rref_batch(pts[:, None, :], q, space.field.inv)
    keys = keys_of(canon)
    keys, first = np.unique(keys, return_index=True)
    canon = canon[first]
    G = build_root_system("D", n)
    X = make_subgroup(G, [FactorSpec("A", n - 1)], 1)
    inst = build_subgroup_instance(space, X)
    N = len(canon)
    edges = []
    for g in inst.generators:
        img = rref_batch((canon @ g.T) % q, q, space.field.inv)
        k = keys_of(img)
        idx = np.searchsorted(keys, k)
        edges.append((np.arange(N), idx))
    labels = _components(N, edges)
    sq = {(a * a) % q for a in range(1, q)}
    classes = {frozenset((int(c) * s) % q for s in sq) for c in set(Qv[Qv != 0].tolist())}
    return len(set(labels.tolist())), len(classes)


def verify_section3_properties(space: FormedSpace, samples: int | None = None) -> PropertyReport:
    rep = PropertyReport()
    if space.decomposition is None:
        raise ValueError("space carries no decomposition")
    rep.checks.append(check_lemma_34_bilinear(space, samples))
    if space.quadratic is not None:
        rep.checks.append(check_lemma_34_quadratic(space))
    rep.checks.append(check_lemma_37(space))
    n1 = sum(1 for c in space.decomposition[0] if c < space.n)
    if space.family in "CD" and space.dimension <= 6 and 0 < n1 < space.n:
        top = space.n - 1 if space.family == "D" else space.n
        for k in range(1, top + 1):
            for x1 in ("trivial", "full"):
                rep.checks.append(check_lemma_35(space, k, x1))
    return rep
