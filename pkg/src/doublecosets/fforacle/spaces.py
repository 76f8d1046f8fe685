"""Natural modules with their standard split forms.

Basis order is e_1..e_n, f_1..f_n, then d for odd orthogonal spaces, with
beta(e_i, f_i) = 1.  For type A the module is F_q^{n+1} with no form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import PrimeField, prime_field


@dataclass(eq=False)
class FormedSpace:
    family: str
    n: int
    field: PrimeField
    dimension: int
    bilinear: np.ndarray | None  # Gram matrix of beta
    quadratic: np.ndarray | None  # upper triangular: Q(v) = v^T U v
    decomposition: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def witt_index(self) -> int:
        return self.n + 1 if self.family == "A" else self.n

    def e(self, i: int) -> int:
        """Coordinate index of e_i (1-based i)."""
        return i - 1

    def f(self, i: int) -> int:
        return self.n + i - 1

    @property
    def d(self) -> int:
        return 2 * self.n

    def beta(self, u, v) -> int:
        return int(np.asarray(u) @ self.bilinear @ np.asarray(v)) % self.q

    def Q(self, v) -> int:
        v = np.asarray(v)
        return int(v @ self.quadratic @ v) % self.q

    def beta_rows(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """beta between the rows of stacked matrices: (..., r, m) x (..., s, m)."""
        return np.einsum("...im,mk,...jk->...ij", A, self.bilinear, B) % self.q

    def Q_rows(self, A: np.ndarray) -> np.ndarray:
        return np.einsum("...im,mk,...ik->...i", A, self.quadratic, A) % self.q

    def is_totally_singular(self, A: np.ndarray) -> np.ndarray:
        """Vectorized total singularity test for row spaces of (..., r, m)."""
        A = np.asarray(A, dtype=np.int64)
        if self.family == "A":
            return np.ones(A.shape[:-2], dtype=bool)
        ok = (self.beta_rows(A, A) == 0).all(axis=(-1, -2))
        if self.quadratic is not None:
            ok &= (self.Q_rows(A) == 0).all(axis=-1)
        return ok

    def projections(self):
        if self.decomposition is None:
            raise ValueError("space carries no decomposition")
        m = self.dimension
        p1 = np.zeros((m, m), dtype=np.int64)
        p2 = np.zeros((m, m), dtype=np.int64)
        for c in self.decomposition[0]:
            p1[c, c] = 1
        for c in self.decomposition[1]:
            p2[c, c] = 1
        return p1, p2

    def split(self, k: int, with_d: bool = False) -> "FormedSpace":
        """Copy with V_1 = <e_i, f_i : i <= k> (plus d if asked), V_2 the complement."""
        if not 0 <= k <= self.n:
            raise ValueError("k out of range")
        v1 = [self.e(i) for i in range(1, k + 1)] + [self.f(i) for i in range(1, k + 1)]
        if with_d and self.family == "B":
            v1.append(self.d)
        v2 = [c for c in range(self.dimension) if c not in v1]
        return FormedSpace(self.family, self.n, self.field, self.dimension, self.bilinear,
                           self.quadratic, (tuple(sorted(v1)), tuple(v2)))


def build_formed_space(family: str, n: int, q: int) -> FormedSpace:
    F = prime_field(q)
    if family == "A":
        return FormedSpace("A", n, F, n + 1, None, None)
    if family not in "BCD" or n < 1:
        raise ValueError(f"unsupported family {family}{n}")
    m = 2 * n + (1 if family == "B" else 0)
    B = np.zeros((m, m), dtype=np.int64)
    U = None
    for i in range(n):
        B[i, n + i] = 1
        B[n + i, i] = -1 % q if family == "C" else 1
    if family in "BD":
        U = np.zeros((m, m), dtype=np.int64)
        for i in range(n):
            U[i, n + i] = 1
        if family == "B":
            U[2 * n, 2 * n] = 1
            B[2 * n, 2 * n] = 2 % q
    return FormedSpace(family, n, F, m, B, U)
