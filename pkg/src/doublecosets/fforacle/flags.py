"""Flags of totally singular subspaces, stored in canonical echelon form.

A flag for crossed nodes i_1 < ... < i_k is a chain of totally singular
subspaces; it is stored as the stacked reduced echelon bases of its members,
an array of shape (sum of dims, dim V).  Enumeration is the orbit of the
standard flag under G, which is exactly the flag variety G/P over F_q (for
D_n maximal spaces, exactly one of the two classes).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from ..subgroups import ParabolicSpec
from .groups import MatrixGroupInstance, build_full_group
from .spaces import FormedSpace


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class Budget:
    max_flags: int = 10**6
    max_seconds: float = 60.0


DEFAULT_BUDGET = Budget()


@njit(cache=True)
def _rref_kernel(A, q, inv):
    N, r, m = A.shape
    for b in range(N):
        row = 0
        for c in range(m):
            if row == r:
                break
            p = -1
            for i in range(row, r):
                if A[b, i, c] != 0:
                    p = i
                    break
            if p < 0:
                continue
            if p != row:
                for k in range(m):
                    tmp = A[b, p, k]
                    A[b, p, k] = A[b, row, k]
                    A[b, row, k] = tmp
            s = inv[A[b, row, c]]
            for k in range(m):
                A[b, row, k] = (A[b, row, k] * s) % q
            for i in range(r):
                if i != row:
                    f = A[b, i, c]
                    if f != 0:
                        for k in range(m):
                            A[b, i, k] = (A[b, i, k] - f * A[b, row, k]) % q
            row += 1


def rref_batch(A: np.ndarray, q: int, inv: np.ndarray) -> np.ndarray:
    """Reduced row echelon form of each full-rank matrix in a (N, r, m) batch."""
    A = np.array(A, dtype=np.int64) % q
    if A.size:
        _rref_kernel(A, q, inv.astype(np.int64))
    return A


def flag_dims(space: FormedSpace, P: ParabolicSpec) -> list[int]:
    n = space.n
    if space.family == "D":
        dims = [i for i in P.nodes if i <= n - 2]
        top = set(P.nodes) & {n - 1, n}
        if top == {n - 1, n}:
            dims.append(n - 1)
        elif top:
            dims.append(n)
        return dims
    return list(P.nodes)


def standard_flag(space: FormedSpace, P: ParabolicSpec) -> np.ndarray:
    """The flag of the standard parabolic: spans of leading e_i (class-adjusted in type D)."""
    m = space.dimension
    rows = []
    for d in flag_dims(space, P):
        if d > space.witt_index:
            raise ValueError(f"dimension {d} exceeds Witt index {space.witt_index}")
        B = np.zeros((d, m), dtype=np.int64)
        for i in range(d):
            B[i, space.e(i + 1)] = 1
        if space.family == "D" and d == space.n and P.dn_class == "-":
            B[d - 1] = 0
            B[d - 1, space.f(space.n)] = 1
        rows.append(B)
    if not rows:
        return np.zeros((0, m), dtype=np.int64)
    return np.vstack(rows)


def canonical(flags: np.ndarray, dims: list[int], space: FormedSpace) -> np.ndarray:
    """Canonical form of a batch of flags (N, sum dims, m)."""
    out = np.empty_like(flags)
    start = 0
    for d in dims:
        out[:, start:start + d] = rref_batch(flags[:, start:start + d], space.q, space.field.inv)
        start += d
    return out


def keys_of(flags: np.ndarray) -> np.ndarray:
    N = flags.shape[0]
    raw = np.ascontiguousarray(flags.reshape(N, -1).astype(np.uint8))
    return raw.view(np.dtype((np.void, raw.shape[1]))).ravel()


def _gauss(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def singular_subspace_count(family: str, n: int, k: int, q: int) -> int:
    """Number of totally singular k-spaces (one class when k = n in type D)."""
    if family == "A":
        return _gauss(n + 1, k, q)
    e = {"B": 1, "C": 1, "D": 0}[family]
    count = 1
    for i in range(k):
        count *= (q ** (n - i) - 1) * (q ** (n - i + e - 1) + 1)
    den = 1
    for i in range(k):
        den *= q ** (i + 1) - 1
    count //= den
    if family == "D" and k == n:
        count //= 2
    return count


def expected_flag_count(space: FormedSpace, P: ParabolicSpec) -> int:
    dims = flag_dims(space, P)
    if not dims:
        return 1
    total = singular_subspace_count(space.family, space.n, dims[-1], space.q)
    for lo, hi in zip(dims[:-1], dims[1:]):
        total *= _gauss(hi, lo, space.q)
    return total


@dataclass(eq=False)
class FlagSet:
    parabolic: ParabolicSpec
    dims: list[int]
    flags: np.ndarray  # (N, sum dims, m), canonical, sorted by key
    keys: np.ndarray = field(repr=False)
    space: FormedSpace = field(repr=False)
    _perms: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.flags)

    def index_of(self, canon_flags: np.ndarray) -> np.ndarray:
        k = keys_of(canon_flags)
        idx = np.searchsorted(self.keys, k)
        idx[idx >= len(self.keys)] = 0
        found = self.keys[idx] == k
        return np.where(found, idx, -1)

    def permutation(self, g: np.ndarray, chunk: int = 250_000) -> np.ndarray:
        """Index of g.F for every flag F; -1 where the image leaves the set."""
        key = g.tobytes()
        perm = self._perms.get(key)
        if perm is None:
            parts = []
            gT = g.T
            for lo in range(0, len(self), chunk):
                img = canonical((self.flags[lo:lo + chunk] @ gT) % self.space.q, self.dims, self.space)
                parts.append(self.index_of(img))
            perm = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
            self._perms[key] = perm
        return perm

    def subspaces(self, i: int) -> list[np.ndarray]:
        out, start = [], 0
        for d in self.dims:
            out.append(self.flags[i, start:start + d])
            start += d
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["flag", "member", "dim", "basis"])
        for i in range(len(self)):
            for j, S in enumerate(self.subspaces(i)):
                w.writerow([i, j, S.shape[0], ";".join("".join(str(int(x)) for x in r) for r in S)])
        return buf.getvalue()


def enumerate_flags(
    space: FormedSpace,
    P: ParabolicSpec,
    budget: Budget = DEFAULT_BUDGET,
    group: MatrixGroupInstance | None = None,
) -> FlagSet:
    import time

    dims = flag_dims(space, P)
    if any(d > space.witt_index for d in dims):
        raise ValueError(f"requested dimension exceeds Witt index {space.witt_index}")
    expected = expected_flag_count(space, P)
    if expected > budget.max_flags:
        raise BudgetExceeded(f"{expected} flags exceed budget {budget.max_flags}")
    m = space.dimension
    seed = canonical(standard_flag(space, P)[None], dims, space)
    if not dims:
        return FlagSet(P, dims, seed, keys_of(seed), space)
    G = group or build_full_group(space)
    gens_T = [g.T for g in G.generators]
    t0 = time.monotonic()
    seen = keys_of(seed)
    all_flags = [seed]
    frontier = seed
    while len(frontier):
        imgs = np.concatenate([canonical((frontier @ gT) % space.q, dims, space) for gT in gens_T])
        k = keys_of(imgs)
        k, first = np.unique(k, return_index=True)
        imgs = imgs[first]
        pos = np.searchsorted(seen, k)
        pos[pos >= len(seen)] = 0
        new = seen[pos] != k
        frontier = imgs[new]
        if len(frontier):
            all_flags.append(frontier)
            seen = np.sort(np.concatenate([seen, k[new]]))
        if len(seen) > budget.max_flags:
            raise BudgetExceeded(f"flag enumeration exceeded {budget.max_flags}")
        if time.monotonic() - t0 > budget.max_seconds:
            raise BudgetExceeded(f"flag enumeration exceeded {budget.max_seconds}s")
    flags = np.concatenate(all_flags).astype(np.int8)
    keys = keys_of(flags)
    order = np.argsort(keys, kind="stable")
    fs = FlagSet(P, dims, flags[order], keys[order], space)
    return fs
