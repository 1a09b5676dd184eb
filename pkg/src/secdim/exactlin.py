"""Exact linear algebra over prime fields.

Everything downstream reduces to ranks of dense integer matrices modulo a
31-bit prime.  Entries are kept as int64 so that a product of two reduced
entries never overflows; elimination is exact (no floating point anywhere).
A small counter-based generator makes every random draw replayable from
``(seed, prime)`` alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Default modulus, the Mersenne prime 2^31 - 1.  Products of two reduced
#: elements stay below 2^62 and therefore fit in int64 before reduction.
DEFAULT_PRIME = 2_147_483_647

#: Second prime for consensus runs (largest prime below the default).
SECOND_PRIME = 2_147_483_629

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class FieldElement:
    """An element of F_p, kept reduced to [0, p)."""

    value: int
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"modulus must be >= 2, got {self.p}")
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other
        return FieldElement(int(other), self.p)

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement((self.value + other.value) % self.p, self.p)

    def __sub__(self, other):
        other = self._coerce(other)
        return FieldElement((self.value - other.value) % self.p, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        return FieldElement((self.value * other.value) % self.p, self.p)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value % self.p, self.p)

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if self.value == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return FieldElement(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __int__(self):
        return self.value


class RngStream:
    """Deterministic counter-based stream of F_p elements.

    The i-th output depends only on ``(seed, i)``, so a report citing
    ``(seed, prime)`` can be replayed exactly regardless of how earlier
    draws were consumed.  The mixer is the standard splitmix64 finalizer.
    """

    def __init__(self, seed: int, prime: int = DEFAULT_PRIME):
        self.seed = seed & _MASK64
        self.prime = prime
        self._count = 0

    def _next64(self) -> int:
        self._count += 1
        z = (self.seed + self._count * _GAMMA) & _MASK64
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def element(self) -> int:
        """Uniform-ish element of [0, p); bias is O(p/2^64), irrelevant here."""
        return self._next64() % self.prime

    def nonzero(self) -> int:
        """Element of [1, p), resampling until nonzero."""
        while True:
            v = self.element()
            if v != 0:
                return v

    def unit_vector(self, length: int) -> tuple[int, ...]:
        """Vector with every coordinate nonzero (all charts stay generic)."""
        if length < 1:
            raise ValueError("length must be >= 1")
        return tuple(self.nonzero() for _ in range(length))


@dataclass(frozen=True, eq=False)
class Matrix:
    """Dense matrix over F_p; entries an int64 ndarray reduced mod p."""

    entries: np.ndarray
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"matrix entries must be 2-D, got ndim={arr.ndim}")
        object.__setattr__(self, "entries", arr % self.p)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @classmethod
    def from_rows(cls, rows, p: int = DEFAULT_PRIME) -> "Matrix":
        return cls(np.asarray(rows, dtype=np.int64).reshape(len(rows), -1), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int = DEFAULT_PRIME) -> "Matrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, size: int, p: int = DEFAULT_PRIME) -> "Matrix":
        return cls(np.eye(size, dtype=np.int64), p)

    def stack(self, other: "Matrix") -> "Matrix":
        if other.p != self.p or other.cols != self.cols:
            raise ValueError("stack requires equal modulus and width")
        return Matrix(np.vstack([self.entries, other.entries]), self.p)

    def matmul(self, other: "Matrix") -> "Matrix":
        if other.p != self.p:
            raise ValueError("mixed moduli")
        return Matrix(self.entries @ other.entries % self.p, self.p)


def rank_mod(entries: np.ndarray, p: int) -> int:
    """Rank over F_p by exact Gaussian elimination on an int64 array.

    Pivot choice is the first nonzero entry in the current column; the
    routine exits early once the rank reaches min(rows, cols).  Row updates
    stay inside int64: factors and entries are < p < 2^31, so the products
    below are < 2^62.
    """
    a = np.array(entries, dtype=np.int64) % p
    rows, cols = a.shape
    limit = min(rows, cols)
    if limit == 0:
        return 0
    r = 0
    for c in range(cols):
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        pr = r + int(hits[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        below = a[r + 1:, c]
        nz = np.nonzero(below)[0]
        if nz.size:
            factors = below[nz] * inv % p
            a[r + 1 + nz, c:] = (a[r + 1 + nz, c:] - factors[:, None] * a[r, c:]) % p
        r += 1
        if r == limit:
            break
    return r


def rank(m: Matrix) -> int:
    """Rank of a Matrix over its prime field."""
    return rank_mod(m.entries, m.p)


def random_matrix(rng: RngStream, rows: int, cols: int) -> Matrix:
    entries = np.array(
        [[rng.element() for _ in range(cols)] for _ in range(rows)], dtype=np.int64
    ).reshape(rows, cols)
    return Matrix(entries, rng.prime)


def random_invertible(rng: RngStream, size: int, max_tries: int = 64) -> Matrix:
    """Random invertible size x size matrix (rejection sampling; almost
    every draw is invertible at 31-bit primes)."""
    for _ in range(max_tries):
        m = random_matrix(rng, size, size)
        if rank(m) == size:
            return m
    raise RuntimeError("could not sample an invertible matrix")
