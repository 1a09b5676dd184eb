import numpy as np
import pytest
import sympy

from secdim.ambient import (
    AmbientSpace,
    DivisorKind,
    DivisorSpec,
    Multidegree,
    monomial_basis,
)
from secdim.exactlin import DEFAULT_PRIME, RngStream, rank
from secdim.schemes import (
    ComponentKind,
    DirectionMode,
    GENERIC,
    PlacementConstraint,
    RealizationError,
    RealizedPlacement,
    SchemeGroup,
    SchemeSpec,
    condition_matrix,
    condition_rows,
    matrix_for,
    realize,
    trace_residual_split,
)

P1 = AmbientSpace((1,))
P2 = AmbientSpace((2,))
P3 = AmbientSpace((3,))
HYP = DivisorSpec(0, DivisorKind.HYPERPLANE)


def single(kind, constraint=GENERIC):
    return SchemeSpec((SchemeGroup(kind, constraint, 1),))


def d(*degs):
    return Multidegree(degs)


class TestSpec:
    def test_generic_union_degree(self):
        spec = SchemeSpec.generic_union(7, 1)
        assert spec.degree(P3) == 7 * 4 + 7  # n = 3: 2-points weigh 4, tangential 7

    def test_z71_on_p1xp1_is_26_by_25(self):
        space = AmbientSpace((1, 1))
        m = condition_matrix(
            SchemeSpec.generic_union(7, 1), space, d(4, 4), RngStream(0)
        )
        assert (m.rows, m.cols) == (26, 25)

    def test_empty_scheme(self):
        m = condition_matrix(SchemeSpec.generic_union(0, 0), P2, d(3), RngStream(0))
        assert (m.rows, m.cols) == (0, 10)
        assert rank(m) == 0

    def test_direction_constraint_on_simple_rejected(self):
        bad = single(
            ComponentKind.SIMPLE, PlacementConstraint(HYP, DirectionMode.INSIDE)
        )
        with pytest.raises(RealizationError):
            bad.check(P2)

    def test_direction_constraint_needs_divisor(self):
        bad = single(
            ComponentKind.TANGENTIAL, PlacementConstraint(None, DirectionMode.INSIDE)
        )
        with pytest.raises(RealizationError):
            bad.check(P2)

    def test_json_round_trip(self):
        spec = SchemeSpec(
            (
                SchemeGroup(ComponentKind.DOUBLE_POINT, GENERIC, 2),
                SchemeGroup(
                    ComponentKind.TANGENTIAL,
                    PlacementConstraint(HYP, DirectionMode.INSIDE),
                    1,
                ),
            )
        )
        assert SchemeSpec.from_json(spec.to_json()) == spec


class TestRealize:
    def test_generic_point_coordinates_nonzero(self):
        scheme = realize(single(ComponentKind.DOUBLE_POINT), P2, RngStream(1))
        (pl,) = scheme.placements
        assert len(pl.point) == 1 and len(pl.point[0]) == 3
        assert all(c != 0 for c in pl.point[0])
        assert pl.direction is None

    def test_on_divisor_inside_direction(self):
        spec = single(
            ComponentKind.TANGENTIAL, PlacementConstraint(HYP, DirectionMode.INSIDE)
        )
        scheme = realize(spec, P3, RngStream(2))
        (pl,) = scheme.placements
        assert pl.point[0][-1] == 0  # on the hyperplane
        assert all(c != 0 for c in pl.point[0][:-1])
        assert pl.direction[-1] == 0  # direction tangent to it
        assert all(v != 0 for v in pl.direction[:-1])

    def test_transverse_direction_has_normal_component(self):
        spec = single(
            ComponentKind.TANGENTIAL, PlacementConstraint(HYP, DirectionMode.TRANSVERSE)
        )
        scheme = realize(spec, P3, RngStream(3))
        (pl,) = scheme.placements
        assert pl.direction[-1] != 0

    def test_factor_point_support(self):
        space = AmbientSpace((2, 1))
        div = DivisorSpec(1, DivisorKind.FACTOR_POINT)
        spec = single(ComponentKind.SIMPLE, PlacementConstraint(div))
        scheme = realize(spec, space, RngStream(4))
        (pl,) = scheme.placements
        assert pl.point[1] == (0, 1)

    def test_determinism(self):
        spec = SchemeSpec.generic_union(3, 2)
        a = realize(spec, P3, RngStream(77))
        b = realize(spec, P3, RngStream(77))
        assert a == b

    def test_supports_distinct(self):
        spec = SchemeSpec.generic_union(20, 0)
        scheme = realize(spec, P2, RngStream(5))
        points = [pl.point for pl in scheme.placements]
        assert len(set(points)) == 20


class TestConditionRows:
    def test_simple_point_all_ones(self):
        # at the point (1 : 1) every dehomogenized monomial evaluates to 1
        basis = monomial_basis(P1, d(2))
        pl = RealizedPlacement(ComponentKind.SIMPLE, ((1, 1),))
        rows = condition_rows(pl, basis, DEFAULT_PRIME)
        assert rows.tolist() == [[1, 1, 1]]

    def test_double_point_on_conics_matches_symbolic_rank(self):
        # independent oracle: symbolic rank over the rationals
        x, y = sympy.symbols("x y")
        monos = [m for m in monomial_basis(P2, d(2)).exponents]
        u, v = sympy.Rational(3, 7), sympy.Rational(5, 11)
        sym_rows = []
        for func in (
            lambda f: f,
            lambda f: sympy.diff(f, x),
            lambda f: sympy.diff(f, y),
        ):
            row = []
            for ((e0, e1, e2),) in monos:
                row.append(func(x**e0 * y**e1).subs({x: u, y: v}))
            sym_rows.append(row)
        sym_rank = sympy.Matrix(sym_rows).rank()
        assert sym_rank == 3  # h0 = 6 - 3 = 3

        m = condition_matrix(single(ComponentKind.DOUBLE_POINT), P2, d(2), RngStream(6))
        assert (m.rows, m.cols) == (3, 6)
        assert rank(m) == sym_rank

    def test_tangential_on_p1_kills_quadrics(self):
        # triple condition at a point of P^1: no binary quadric survives
        m = condition_matrix(single(ComponentKind.TANGENTIAL), P1, d(2), RngStream(7))
        assert (m.rows, m.cols) == (3, 3)
        assert rank(m) == 3

    def test_row_counts(self):
        for kind, expect in [
            (ComponentKind.SIMPLE, 1),
            (ComponentKind.TANGENT_VECTOR, 2),
            (ComponentKind.DOUBLE_POINT, 4),
            (ComponentKind.TANGENTIAL, 7),
        ]:
            m = condition_matrix(single(kind), P3, d(3), RngStream(8))
            assert m.rows == expect == kind.row_count(3)

    def test_nested_functionals(self):
        # double point rows are the leading block of the tangential rows;
        # the tangent-vector row is the direction combination of the firsts
        space = AmbientSpace((2, 1))
        deg = d(3, 2)
        basis = monomial_basis(space, deg)
        p = DEFAULT_PRIME
        base = realize(single(ComponentKind.TANGENTIAL), space, RngStream(9))
        (tpl,) = base.placements
        dpl = RealizedPlacement(ComponentKind.DOUBLE_POINT, tpl.point)
        vpl = RealizedPlacement(ComponentKind.TANGENT_VECTOR, tpl.point, tpl.direction)
        t_rows = condition_rows(tpl, basis, p)
        d_rows = condition_rows(dpl, basis, p)
        v_rows = condition_rows(vpl, basis, p)
        n = space.total_dim
        assert np.array_equal(d_rows, t_rows[: n + 1])
        combo = np.zeros(len(basis), dtype=np.int64)
        for j in range(n):
            combo = (combo + tpl.direction[j] * t_rows[1 + j]) % p
        assert np.array_equal(v_rows[1], combo)

    def test_single_placements_independent_when_degrees_at_least_two(self):
        spaces = [
            (P2, d(2)),
            (P3, d(2)),
            (AmbientSpace((2, 1)), d(2, 2)),
            (AmbientSpace((1, 1, 1)), d(2, 2, 2)),
        ]
        for seed, (space, deg) in enumerate(spaces):
            for kind in ComponentKind:
                m = condition_matrix(single(kind), space, deg, RngStream(10 + seed))
                assert rank(m) == m.rows, (space, kind)

    def test_tangential_needs_second_order_degree(self):
        # on the multilinear system of (P^1)^2 the mixed rows collapse
        space = AmbientSpace((1, 1))
        m = condition_matrix(single(ComponentKind.TANGENTIAL), space, d(1, 1), RngStream(11))
        assert m.rows == 5 and rank(m) < 5


class TestSplit:
    def cases(self):
        inside = PlacementConstraint(HYP, DirectionMode.INSIDE)
        transverse = PlacementConstraint(HYP, DirectionMode.TRANSVERSE)
        on_div = PlacementConstraint(HYP)
        return inside, transverse, on_div

    def test_double_point_split_degrees(self):
        _, _, on_div = self.cases()
        scheme = realize(single(ComponentKind.DOUBLE_POINT, on_div), P3, RngStream(12))
        tr, res = trace_residual_split(scheme, HYP)
        assert tr.space == P2
        assert (tr.degree(), res.degree()) == (3, 1)

    def test_tangential_inside_split_degrees(self):
        inside, _, _ = self.cases()
        scheme = realize(single(ComponentKind.TANGENTIAL, inside), P3, RngStream(13))
        tr, res = trace_residual_split(scheme, HYP)
        assert (tr.degree(), res.degree()) == (5, 2)
        (rpl,) = res.placements
        assert rpl.kind is ComponentKind.TANGENT_VECTOR

    def test_tangential_transverse_double_residuation(self):
        _, transverse, _ = self.cases()
        scheme = realize(single(ComponentKind.TANGENTIAL, transverse), P3, RngStream(14))
        tr, res = trace_residual_split(scheme, HYP)
        assert (tr.degree(), res.degree()) == (3, 4)
        tr2, res2 = trace_residual_split(res, HYP)
        assert (tr2.degree(), res2.degree()) == (3, 1)

    def test_generic_components_pass_to_residual(self):
        inside, _, _ = self.cases()
        spec = SchemeSpec(
            (
                SchemeGroup(ComponentKind.DOUBLE_POINT, GENERIC, 2),
                SchemeGroup(ComponentKind.TANGENTIAL, inside, 1),
            )
        )
        scheme = realize(spec, P3, RngStream(15))
        tr, res = trace_residual_split(scheme, HYP)
        assert tr.degree() == 5
        assert res.degree() == 2 * 4 + 2

    def test_degree_conservation_random(self):
        inside, transverse, on_div = self.cases()
        groups = [
            SchemeGroup(ComponentKind.DOUBLE_POINT, on_div, 2),
            SchemeGroup(ComponentKind.TANGENTIAL, inside, 1),
            SchemeGroup(ComponentKind.TANGENTIAL, transverse, 1),
            SchemeGroup(ComponentKind.SIMPLE, on_div, 3),
            SchemeGroup(ComponentKind.DOUBLE_POINT, GENERIC, 2),
        ]
        spec = SchemeSpec(tuple(groups))
        for seed in range(10):
            scheme = realize(spec, P3, RngStream(30 + seed))
            tr, res = trace_residual_split(scheme, HYP)
            assert scheme.degree() == tr.degree() + res.degree()

    def test_local_ideal_consistency_across_dimensions(self):
        # the adopted tangential ideal reproduces the split patterns for all n
        for n in (2, 3, 4, 5):
            space = AmbientSpace((n,))
            inside = PlacementConstraint(HYP, DirectionMode.INSIDE)
            transverse = PlacementConstraint(HYP, DirectionMode.TRANSVERSE)
            s1 = realize(single(ComponentKind.TANGENTIAL, inside), space, RngStream(n))
            tr, res = trace_residual_split(s1, HYP)
            assert (tr.degree(), res.degree()) == (2 * n - 1, 2)
            s2 = realize(single(ComponentKind.TANGENTIAL, transverse), space, RngStream(n))
            tr, res = trace_residual_split(s2, HYP)
            assert (tr.degree(), res.degree()) == (n, n + 1)

    def test_transverse_tangent_vector_rejected(self):
        _, transverse, _ = self.cases()
        scheme = realize(
            single(ComponentKind.TANGENT_VECTOR, transverse), P3, RngStream(16)
        )
        with pytest.raises(RealizationError):
            trace_residual_split(scheme, HYP)

    def test_factor_point_split(self):
        space = AmbientSpace((2, 1))
        div = DivisorSpec(1, DivisorKind.FACTOR_POINT)
        inside = PlacementConstraint(div, DirectionMode.INSIDE)
        scheme = realize(single(ComponentKind.TANGENTIAL, inside), space, RngStream(17))
        tr, res = trace_residual_split(scheme, div)
        assert tr.space == P2
        assert (tr.degree(), res.degree()) == (5, 2)

    def test_split_rows_bound_sections(self):
        # h0(full) <= h0(trace) + h0(residual) realized as exact linear algebra
        from secdim.ambient import residual_system, trace_system

        space, deg = P2, d(3)
        inside = PlacementConstraint(HYP, DirectionMode.INSIDE)
        scheme = realize(single(ComponentKind.TANGENTIAL, inside), space, RngStream(18))
        tr, res = trace_residual_split(scheme, HYP)
        ts, td = trace_system(space, deg, HYP)
        rs, rd = residual_system(space, deg, HYP)
        h0_full = 10 - rank(matrix_for(scheme, deg))
        h0_tr = 4 - rank(matrix_for(tr, td))
        h0_res = 6 - rank(matrix_for(res, rd))
        assert h0_full == 5 and h0_tr == 1 and h0_res == 4
        assert h0_full <= h0_tr + h0_res
