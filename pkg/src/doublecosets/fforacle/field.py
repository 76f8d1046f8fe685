"""Prime fields F_q with lookup tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

SUPPORTED_PRIMES = (2, 3, 5, 7)


class UnsupportedField(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PrimeField:
    q: int
    inv: np.ndarray = field(repr=False)
    primitive: int = 1

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(self.q)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.q

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.q

    def neg(self, a: int) -> int:
        return (-a) % self.q

    def inverse(self, a: int) -> int:
        if a % self.q == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv[a % self.q])

    def elements(self) -> range:
        return range(self.q)

    def squares(self) -> frozenset:
        return frozenset((a * a) % self.q for a in range(1, self.q))


@lru_cache(maxsize=None)
def prime_field(q: int) -> PrimeField:
    if q not in SUPPORTED_PRIMES:
        raise UnsupportedField(f"q must be one of {SUPPORTED_PRIMES}, got {q}")
    inv = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        inv[a] = pow(a, q - 2, q)
    prim = next(g for g in range(1, q) if len({pow(g, k, q) for k in range(1, q)}) == q - 1)
    return PrimeField(q, inv, prim)
