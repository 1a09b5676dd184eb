"""Zero-dimensional interpolation schemes and their condition rows.

A scheme specification says how many components of each kind to place and
where (generically, or on a distinguished divisor, with the attached
direction either inside the divisor or transverse to it).  Realizing a
specification samples concrete points and directions over F_p; each realized
component then contributes rows of evaluated monomial derivatives:

    simple point     eval                                        (1 row)
    tangent vector   eval, d_v                                   (2 rows)
    double point     eval, d_1 ... d_n                           (n+1 rows)
    tangential       eval, d_1 ... d_n, d_v d_1 ... d_v d_n      (2n+1 rows)

where n is the total dimension of the product, d_i are the affine partials
of the product chart and d_v is the directional derivative along the
component's tangent direction.  The tangential component realizes the local
ideal m^3 + I_L^2 (L the line through the point in direction v), the unique
degree-(2n+1) choice whose trace/residual behaviour along a divisor matches
the (2n-1, 2) and (n, n, 1) splitting patterns asserted in the test suite.

All evaluation happens in the product affine chart where each factor's last
nonzero homogeneous coordinate is scaled to 1.  Points constrained to the
distinguished divisors have the cut coordinate equal to zero and everything
else nonzero, so the chart is always defined.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .ambient import (
    AmbientSpace,
    DivisorKind,
    DivisorSpec,
    MonomialBasis,
    Multidegree,
    monomial_basis,
)
from .exactlin import Matrix, RngStream


class RealizationError(RuntimeError):
    """Inconsistent constraints or a degenerate sample that retries cannot fix."""


class ComponentKind(Enum):
    SIMPLE = "simple"
    TANGENT_VECTOR = "tangent_vector"
    DOUBLE_POINT = "double_point"
    TANGENTIAL = "tangential"

    def row_count(self, n: int) -> int:
        """Conditions imposed on a space of total dimension n."""
        return {
            ComponentKind.SIMPLE: 1,
            ComponentKind.TANGENT_VECTOR: 2,
            ComponentKind.DOUBLE_POINT: n + 1,
            ComponentKind.TANGENTIAL: 2 * n + 1,
        }[self]

    @property
    def directed(self) -> bool:
        return self in (ComponentKind.TANGENT_VECTOR, ComponentKind.TANGENTIAL)


class DirectionMode(Enum):
    GENERIC = "generic"
    INSIDE = "inside"          # tangent direction inside the divisor
    TRANSVERSE = "transverse"  # nonzero component normal to the divisor


@dataclass(frozen=True)
class PlacementConstraint:
    """Support location (generic or on a divisor) plus a direction mode."""

    divisor: DivisorSpec | None = None
    direction: DirectionMode = DirectionMode.GENERIC

    def check(self, kind: ComponentKind, space: AmbientSpace):
        if self.divisor is not None:
            self.divisor.check_against(space)
        if self.direction is not DirectionMode.GENERIC:
            if self.divisor is None:
                raise RealizationError(
                    "direction constraints require support on a divisor"
                )
            if not kind.directed:
                raise RealizationError(
                    f"direction constraint is meaningless for {kind.value}"
                )


GENERIC = PlacementConstraint()


@dataclass(frozen=True)
class SchemeGroup:
    kind: ComponentKind
    constraint: PlacementConstraint = GENERIC
    count: int = 1

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("component counts must be >= 0")


@dataclass(frozen=True)
class SchemeSpec:
    """Symbolic scheme: a list of (kind, constraint, count) groups."""

    groups: tuple[SchemeGroup, ...]

    @classmethod
    def generic_union(cls, double_points: int, tangential: int) -> "SchemeSpec":
        """The standard Z_{a,b}: a generic double points, b tangential schemes."""
        groups = []
        if double_points:
            groups.append(SchemeGroup(ComponentKind.DOUBLE_POINT, GENERIC, double_points))
        if tangential:
            groups.append(SchemeGroup(ComponentKind.TANGENTIAL, GENERIC, tangential))
        return cls(tuple(groups))

    def degree(self, space: AmbientSpace) -> int:
        n = space.total_dim
        return sum(g.count * g.kind.row_count(n) for g in self.groups)

    def check(self, space: AmbientSpace):
        for g in self.groups:
            g.constraint.check(g.kind, space)

    def to_json(self) -> list[dict]:
        out = []
        for g in self.groups:
            support = "generic"
            if g.constraint.divisor is not None:
                d = g.constraint.divisor
                support = {"factor": d.factor_index, "kind": d.kind.value}
            out.append(
                {
                    "kind": g.kind.value,
                    "count": g.count,
                    "support": support,
                    "direction": g.constraint.direction.value,
                }
            )
        return out

    @classmethod
    def from_json(cls, data) -> "SchemeSpec":
        groups = []
        for item in data:
            kind = ComponentKind(item["kind"])
            support = item.get("support", "generic")
            divisor = None
            if support != "generic":
                divisor = DivisorSpec(
                    int(support["factor"]), DivisorKind(support["kind"])
                )
            direction = DirectionMode(item.get("direction", "generic"))
            groups.append(
                SchemeGroup(
                    kind,
                    PlacementConstraint(divisor, direction),
                    int(item.get("count", 1)),
                )
            )
        return cls(tuple(groups))


@dataclass(frozen=True)
class RealizedPlacement:
    """One concrete component: homogeneous point per factor, optional
    direction in the global affine chart, and the divisor it sits on."""

    kind: ComponentKind
    point: tuple[tuple[int, ...], ...]
    direction: tuple[int, ...] | None = None
    divisor: DivisorSpec | None = None

    def degree(self, n: int) -> int:
        return self.kind.row_count(n)


@dataclass(frozen=True)
class RealizedScheme:
    space: AmbientSpace
    p: int
    placements: tuple[RealizedPlacement, ...]

    def degree(self) -> int:
        n = self.space.total_dim
        return sum(pl.degree(n) for pl in self.placements)


def _sample_point(space, constraint, rng) -> tuple[tuple[int, ...], ...]:
    coords = []
    for i, n in enumerate(space.factor_dims):
        div = constraint.divisor
        if div is not None and div.factor_index == i:
            if div.kind is DivisorKind.HYPERPLANE:
                coords.append(tuple(rng.nonzero() for _ in range(n)) + (0,))
            else:
                coords.append((0, 1))
        else:
            coords.append(tuple(rng.nonzero() for _ in range(n + 1)))
    return tuple(coords)


def _sample_direction(space, kind, constraint, rng) -> tuple[int, ...] | None:
    if not kind.directed:
        return None
    n = space.total_dim
    v = list(rng.unit_vector(n))
    if constraint.direction is DirectionMode.INSIDE:
        v[constraint.divisor.normal_slot(space)] = 0
    # TRANSVERSE and GENERIC keep every component nonzero; for TRANSVERSE the
    # normal slot being nonzero is exactly the constraint.
    return tuple(v)


def realize(spec: SchemeSpec, space: AmbientSpace, rng: RngStream,
            max_retries: int = 1000) -> RealizedScheme:
    """Sample a concrete scheme honoring all constraints, deterministically
    in the rng state.  Supports are pairwise distinct (resampled on the
    astronomically unlikely collision)."""
    spec.check(space)
    placements = []
    seen = set()
    for g in spec.groups:
        for _ in range(g.count):
            for attempt in range(max_retries):
                point = _sample_point(space, g.constraint, rng)
                if point not in seen:
                    break
            else:
                raise RealizationError("could not sample distinct supports")
            seen.add(point)
            direction = _sample_direction(space, g.kind, g.constraint, rng)
            placements.append(
                RealizedPlacement(g.kind, point, direction, g.constraint.divisor)
            )
    return RealizedScheme(space, rng.prime, tuple(placements))


# ---------------------------------------------------------------------------
# chart bookkeeping


def _chart_index(factor_point) -> int:
    """Index of the last nonzero homogeneous coordinate (the chart pivot)."""
    for j in range(len(factor_point) - 1, -1, -1):
        if factor_point[j] != 0:
            return j
    raise RealizationError("point with all coordinates zero")


def _chart_data(space, point, p):
    """Per-factor (affine indices, affine values); the global chart is the
    concatenation of the per-factor blocks."""
    indices = []
    values = []
    for factor_point in point:
        c = _chart_index(factor_point)
        inv = pow(int(factor_point[c]), p - 2, p)
        idx = [j for j in range(len(factor_point)) if j != c]
        indices.append(tuple(idx))
        values.append(tuple(factor_point[j] * inv % p for j in idx))
    return indices, values


def condition_rows(
    placement: RealizedPlacement, basis: MonomialBasis, p: int
) -> np.ndarray:
    """Rows of evaluated monomial derivatives for one placement.

    Returns an int64 array of shape (row_count, N), reduced mod p.  Raises
    if the point has a zero where the chart or a constrained direction needs
    structure it cannot provide (cannot happen for realize() output).
    """
    space = basis.space
    n = space.total_dim
    indices, values = _chart_data(space, placement.point, p)

    # Dehomogenized exponent matrix E (N x n) and affine point a (length n).
    blocks = []
    for arr, idx in zip(basis.factor_arrays, indices):
        blocks.append(arr[:, idx])
    E = np.concatenate(blocks, axis=1) if blocks else np.zeros((len(basis), 0), np.int64)
    a = [v for vals in values for v in vals]

    max_exp = [int(E[:, j].max(initial=0)) for j in range(n)]
    pows = []
    for j in range(n):
        table = [1]
        for _ in range(max_exp[j]):
            table.append(table[-1] * a[j] % p)
        pows.append(np.array(table, dtype=np.int64))

    def functional(orders: dict[int, int]) -> np.ndarray:
        out = np.ones(len(basis), dtype=np.int64)
        for j in range(n):
            e = E[:, j]
            b = orders.get(j, 0)
            if b == 0:
                out = out * pows[j][e] % p
            else:
                coef = e.copy()
                for k in range(1, b):
                    coef = coef * (e - k)
                ok = e >= b
                vals = np.where(ok, coef % p * pows[j][np.where(ok, e - b, 0)] % p, 0)
                out = out * vals % p
        return out

    kind = placement.kind
    rows = [functional({})]
    if kind is ComponentKind.SIMPLE:
        return np.array(rows, dtype=np.int64)

    firsts = [functional({j: 1}) for j in range(n)]
    if kind is ComponentKind.TANGENT_VECTOR:
        v = placement.direction
        dv = np.zeros(len(basis), dtype=np.int64)
        for j in range(n):
            if v[j]:
                dv = (dv + v[j] * firsts[j]) % p
        rows.append(dv)
        return np.array(rows, dtype=np.int64)

    rows.extend(firsts)
    if kind is ComponentKind.DOUBLE_POINT:
        return np.array(rows, dtype=np.int64)

    # Tangential: mixed second derivatives d_v d_i for every affine i.
    v = placement.direction
    second = {}
    for j in range(n):
        if not v[j]:
            continue
        for i in range(n):
            key = (min(i, j), max(i, j))
            if key not in second:
                second[key] = functional({i: 1, j: 1} if i != j else {i: 2})
    for i in range(n):
        mixed = np.zeros(len(basis), dtype=np.int64)
        for j in range(n):
            if v[j]:
                mixed = (mixed + v[j] * second[(min(i, j), max(i, j))]) % p
        rows.append(mixed)
    return np.array(rows, dtype=np.int64)


def matrix_for(realized: RealizedScheme, deg: Multidegree) -> Matrix:
    """Condition matrix of a realized scheme: deg(Z) rows by N columns,
    rows grouped per placement in order."""
    basis = monomial_basis(realized.space, deg)
    n_cols = len(basis)
    if not realized.placements:
        return Matrix(np.zeros((0, n_cols), dtype=np.int64), realized.p)
    rows = [condition_rows(pl, basis, realized.p) for pl in realized.placements]
    return Matrix(np.vstack(rows), realized.p)


def condition_matrix(
    spec: SchemeSpec, space: AmbientSpace, deg: Multidegree, rng: RngStream
) -> Matrix:
    """Realize a specification and build its condition matrix."""
    deg.check_against(space)
    return matrix_for(realize(spec, space, rng), deg)


# ---------------------------------------------------------------------------
# trace / residual splitting


def _direction_mode(placement: RealizedPlacement, space: AmbientSpace) -> DirectionMode:
    slot = placement.divisor.normal_slot(space)
    return DirectionMode.INSIDE if placement.direction[slot] == 0 else DirectionMode.TRANSVERSE


def _trace_point(point, div: DivisorSpec):
    i = div.factor_index
    if div.kind is DivisorKind.HYPERPLANE:
        factor = point[i]
        if factor[-1] != 0:
            raise RealizationError("placement marked on-divisor misses the divisor")
        return point[:i] + (factor[:-1],) + point[i + 1:]
    if point[i][0] != 0:
        raise RealizationError("placement marked on-divisor misses the divisor")
    return point[:i] + point[i + 1:]


def _trace_direction(direction, space: AmbientSpace, div: DivisorSpec):
    if direction is None:
        return None
    slot = div.normal_slot(space)
    return direction[:slot] + direction[slot + 1:]


def trace_residual_split(
    realized: RealizedScheme, div: DivisorSpec
) -> tuple[RealizedScheme, RealizedScheme]:
    """Split a realized scheme along a divisor into trace and residual.

    Components not marked on the divisor go to the residual untouched.
    On-divisor components split by kind:

        simple               -> (simple in D,            nothing)
        tangent vector, v in D -> (tangent vector of D,  nothing)
        double point         -> (double point of D,      simple at p)
        tangential, v in D   -> (tangential of D,        tangent vector at p)
        tangential, v not in D -> (double point of D,    double point on D)

    Degrees obey deg = deg(trace) + deg(residual) exactly; residual
    components keep their divisor marker so a second split (the n, n, 1
    pattern) works unchanged.
    """
    space = realized.space
    div.check_against(space)
    i = div.factor_index
    if div.kind is DivisorKind.HYPERPLANE:
        dims = list(space.factor_dims)
        dims[i] -= 1
        t_space = AmbientSpace(tuple(dims))
    else:
        t_space = AmbientSpace(space.factor_dims[:i] + space.factor_dims[i + 1:])

    trace_placements = []
    residual_placements = []
    for pl in realized.placements:
        if pl.divisor is None:
            residual_placements.append(pl)
            continue
        if pl.divisor != div:
            raise RealizationError(
                f"placement constrained to {pl.divisor}, splitting along {div}"
            )
        t_point = _trace_point(pl.point, div)
        t_dir = _trace_direction(pl.direction, space, div)
        kind = pl.kind
        if kind is ComponentKind.SIMPLE:
            trace_placements.append(RealizedPlacement(kind, t_point))
        elif kind is ComponentKind.TANGENT_VECTOR:
            if _direction_mode(pl, space) is not DirectionMode.INSIDE:
                raise RealizationError(
                    "tangent vector transverse to the divisor has no split rule"
                )
            trace_placements.append(RealizedPlacement(kind, t_point, t_dir))
        elif kind is ComponentKind.DOUBLE_POINT:
            trace_placements.append(RealizedPlacement(kind, t_point))
            residual_placements.append(
                RealizedPlacement(ComponentKind.SIMPLE, pl.point, None, div)
            )
        elif _direction_mode(pl, space) is DirectionMode.INSIDE:
            trace_placements.append(RealizedPlacement(kind, t_point, t_dir))
            residual_placements.append(
                RealizedPlacement(ComponentKind.TANGENT_VECTOR, pl.point, pl.direction, div)
            )
        else:
            trace_placements.append(RealizedPlacement(ComponentKind.DOUBLE_POINT, t_point))
            residual_placements.append(
                RealizedPlacement(ComponentKind.DOUBLE_POINT, pl.point, None, div)
            )
    return (
        RealizedScheme(t_space, realized.p, tuple(trace_placements)),
        RealizedScheme(space, realized.p, tuple(residual_placements)),
    )


# ---------------------------------------------------------------------------
# coordinate changes (used by the invariance checks)


def _transform_factor_point(g: np.ndarray, coords, p: int) -> tuple[int, ...]:
    vec = np.array(coords, dtype=np.int64)
    return tuple(int(x) for x in (g @ vec) % p)


def apply_coordinate_change(
    realized: RealizedScheme, mats: list[np.ndarray]
) -> RealizedScheme:
    """Apply one invertible matrix per factor to every placement.

    Points map homogeneously; directions map by the differential of the
    induced chart map.  Rank of the condition matrix is invariant under such
    changes, which is what the projective-invariance tests assert.
    """
    space, p = realized.space, realized.p
    offsets = space.affine_offsets()
    new_placements = []
    for pl in realized.placements:
        new_point = tuple(
            _transform_factor_point(np.asarray(g, dtype=np.int64) % p, fp, p)
            for g, fp in zip(mats, pl.point)
        )
        new_dir = None
        if pl.direction is not None:
            parts = []
            for fi, (g, fp) in enumerate(zip(mats, pl.point)):
                g = np.asarray(g, dtype=np.int64) % p
                m = space.factor_dims[fi]
                c_old = _chart_index(fp)
                old_idx = [j for j in range(m + 1) if j != c_old]
                # Homogeneous lift of the direction block: zero in the old
                # chart pivot, the affine components elsewhere.
                lift = [0] * (m + 1)
                for pos, j in enumerate(old_idx):
                    lift[j] = pl.direction[offsets[fi] + pos]
                gp = (g @ np.array(fp, dtype=np.int64)) % p
                gv = (g @ np.array(lift, dtype=np.int64)) % p
                c_new = _chart_index(tuple(int(x) for x in gp))
                denom = int(gp[c_new])
                inv = pow(denom, p - 2, p)
                inv2 = inv * inv % p
                for j in range(m + 1):
                    if j == c_new:
                        continue
                    # d/dt (gp_j + t gv_j)/(gp_c + t gv_c) at t=0
                    val = (int(gv[j]) * denom - int(gp[j]) * int(gv[c_new])) % p
                    parts.append(val * inv2 % p)
            new_dir = tuple(parts)
        new_placements.append(replace(pl, point=new_point, direction=new_dir))
    return RealizedScheme(space, p, tuple(new_placements))
