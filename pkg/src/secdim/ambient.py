"""Multiprojective ambient spaces, multidegrees and divisor geometry.

An ambient space is a product P^{n_1} x ... x P^{n_k}; a multidegree
(d_1, ..., d_k) picks out the linear system spanned by the multihomogeneous
monomials of those per-factor degrees.  Two kinds of distinguished divisors
are supported: the vanishing of the last coordinate of a factor of dimension
>= 2 (a "hyperplane"), and the slice through the point (0:1) of a P^1 factor
(a "factor point").  Both choices are fixed once and for all so that trace
and residual systems, and the matrices built on them, are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class AmbientSpace:
    """Product of projective spaces with per-factor dimensions n_i >= 1."""

    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.factor_dims)
        if len(dims) < 1:
            raise ValueError("ambient space needs at least one factor")
        if any(n < 1 for n in dims):
            raise ValueError(f"factor dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def num_factors(self) -> int:
        return len(self.factor_dims)

    @property
    def total_dim(self) -> int:
        return sum(self.factor_dims)

    def affine_offsets(self) -> tuple[int, ...]:
        """Start index of each factor's block in the length-n affine chart."""
        offsets = []
        acc = 0
        for n in self.factor_dims:
            offsets.append(acc)
            acc += n
        return tuple(offsets)

    def __str__(self):
        return " x ".join(f"P^{n}" for n in self.factor_dims)


@dataclass(frozen=True)
class Multidegree:
    """One non-negative degree per factor, the twist O(d_1, ..., d_k)."""

    degrees: tuple[int, ...]

    def __post_init__(self):
        degs = tuple(int(d) for d in self.degrees)
        if any(d < 0 for d in degs):
            raise ValueError(f"degrees must be >= 0, got {degs}")
        object.__setattr__(self, "degrees", degs)

    def check_against(self, space: AmbientSpace):
        if len(self.degrees) != space.num_factors:
            raise ValueError(
                f"multidegree {self.degrees} does not match {space.num_factors} factors"
            )


class DivisorKind(Enum):
    HYPERPLANE = "hyperplane"
    FACTOR_POINT = "factor_point"


@dataclass(frozen=True)
class DivisorSpec:
    """A distinguished divisor on one factor.

    HYPERPLANE is the vanishing of the factor's last homogeneous coordinate
    (needs n_i >= 2, otherwise the "divisor" would be a point of the factor);
    FACTOR_POINT is the slice through (0:1) of a P^1 factor.
    """

    factor_index: int
    kind: DivisorKind

    def check_against(self, space: AmbientSpace):
        if not 0 <= self.factor_index < space.num_factors:
            raise ValueError(f"no factor {self.factor_index} in {space}")
        n = space.factor_dims[self.factor_index]
        if self.kind is DivisorKind.HYPERPLANE and n < 2:
            raise ValueError("hyperplane divisors need a factor of dimension >= 2")
        if self.kind is DivisorKind.FACTOR_POINT and n != 1:
            raise ValueError("factor-point divisors live on P^1 factors only")

    def normal_slot(self, space: AmbientSpace) -> int:
        """Global affine index of the coordinate cutting out the divisor.

        In the chart of a point on the divisor this is the last affine slot
        of the carrying factor; directions tangent to the divisor are exactly
        those with a zero in this slot.
        """
        self.check_against(space)
        n = space.factor_dims[self.factor_index]
        return space.affine_offsets()[self.factor_index] + n - 1


def basis_size(space: AmbientSpace, deg: Multidegree) -> int:
    """Number of monomials N = prod_i C(n_i + d_i, n_i); errors past int64."""
    deg.check_against(space)
    total = 1
    for n, d in zip(space.factor_dims, deg.degrees):
        total *= math.comb(n + d, n)
        if total > _INT64_MAX:
            raise OverflowError(f"basis size exceeds 64 bits for {space} {deg.degrees}")
    return total


def _degree_exponents(nvars: int, total: int):
    """All exponent tuples of length nvars summing to total, lexicographically
    descending (so P^1 degree 2 lists x^2, xy, y^2 in that order)."""
    if nvars == 1:
        yield (total,)
        return
    for e in range(total, -1, -1):
        for rest in _degree_exponents(nvars - 1, total - e):
            yield (e,) + rest


@dataclass(frozen=True, eq=False)
class MonomialBasis:
    """Ordered monomial basis of H^0(O(d_1,...,d_k)).

    ``exponents`` lists, per monomial, one homogeneous exponent tuple per
    factor.  ``factor_arrays`` carries the same data as one int64 array of
    shape (N, n_i + 1) per factor, for vectorized evaluation.  The order is
    descending-lexicographic within each factor and across factors (first
    factor outermost) and never changes within a process or across runs.
    """

    space: AmbientSpace
    degree: Multidegree
    exponents: tuple[tuple[tuple[int, ...], ...], ...]
    factor_arrays: tuple[np.ndarray, ...]

    def __len__(self):
        return len(self.exponents)


@lru_cache(maxsize=256)
def monomial_basis(space: AmbientSpace, deg: Multidegree) -> MonomialBasis:
    """Build (and cache) the monomial basis for a space and multidegree."""
    n = basis_size(space, deg)  # validates and bounds the size
    per_factor = [
        tuple(_degree_exponents(nd + 1, d))
        for nd, d in zip(space.factor_dims, deg.degrees)
    ]
    combos = [()]
    for tuples in per_factor:
        combos = [prefix + (t,) for prefix in combos for t in tuples]
    assert len(combos) == n
    arrays = tuple(
        np.array([mono[i] for mono in combos], dtype=np.int64)
        for i in range(space.num_factors)
    )
    return MonomialBasis(space, deg, tuple(combos), arrays)


def trace_system(
    space: AmbientSpace, deg: Multidegree, div: DivisorSpec
) -> tuple[AmbientSpace, Multidegree]:
    """Restrict the linear system to the divisor.

    A hyperplane drops the carrying factor's dimension by one and keeps the
    multidegree; a factor point removes the P^1 factor and its degree.
    """
    deg.check_against(space)
    div.check_against(space)
    i = div.factor_index
    if div.kind is DivisorKind.HYPERPLANE:
        dims = list(space.factor_dims)
        dims[i] -= 1
        return AmbientSpace(tuple(dims)), deg
    dims = space.factor_dims[:i] + space.factor_dims[i + 1:]
    degs = deg.degrees[:i] + deg.degrees[i + 1:]
    return AmbientSpace(dims), Multidegree(degs)


def residual_system(
    space: AmbientSpace, deg: Multidegree, div: DivisorSpec
) -> tuple[AmbientSpace, Multidegree]:
    """Twist down by the divisor: same space, carrying degree decremented."""
    deg.check_against(space)
    div.check_against(space)
    i = div.factor_index
    if deg.degrees[i] < 1:
        raise ValueError(f"cannot twist down degree {deg.degrees[i]} on factor {i}")
    degs = list(deg.degrees)
    degs[i] -= 1
    return space, Multidegree(tuple(degs))
