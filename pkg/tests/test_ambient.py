import math

import pytest

from secdim.ambient import (
    AmbientSpace,
    DivisorKind,
    DivisorSpec,
    Multidegree,
    basis_size,
    monomial_basis,
    residual_system,
    trace_system,
)

P1 = AmbientSpace((1,))
P2 = AmbientSpace((2,))
P3 = AmbientSpace((3,))
P4 = AmbientSpace((4,))
P2xP1 = AmbientSpace((2, 1))
P1xP1 = AmbientSpace((1, 1))

HYP = DivisorSpec(0, DivisorKind.HYPERPLANE)


def d(*degs):
    return Multidegree(degs)


class TestSpaces:
    def test_total_dim(self):
        assert P2xP1.total_dim == 3
        assert AmbientSpace((1, 1, 1)).total_dim == 3

    def test_validation(self):
        with pytest.raises(ValueError):
            AmbientSpace(())
        with pytest.raises(ValueError):
            AmbientSpace((0,))

    def test_affine_offsets(self):
        assert AmbientSpace((2, 1, 3)).affine_offsets() == (0, 2, 3)


class TestBasisSize:
    def test_cubics_on_p4(self):
        assert basis_size(P4, d(3)) == 35

    def test_bidegree_three_three(self):
        assert basis_size(P2xP1, d(3, 3)) == 40

    def test_constants(self):
        assert basis_size(P1, d(0)) == 1

    def test_quartics_p1xp1(self):
        assert basis_size(P1xP1, d(4, 4)) == 25

    def test_overflow_guard(self):
        with pytest.raises(OverflowError):
            basis_size(AmbientSpace((40,)), d(40))

    def test_mismatched_degree(self):
        with pytest.raises(ValueError):
            basis_size(P2xP1, d(3))


class TestMonomialBasis:
    def test_p1_degree_two_order(self):
        basis = monomial_basis(P1, d(2))
        assert basis.exponents == (((2, 0),), ((1, 1),), ((0, 2),))

    def test_p1xp1_bilinear(self):
        assert len(monomial_basis(P1xP1, d(1, 1))) == 4

    def test_p2_cubics_enumeration(self):
        basis = monomial_basis(P2, d(3))
        assert len(basis) == math.comb(5, 2) == 10
        for mono in basis.exponents:
            assert sum(mono[0]) == 3

    def test_length_always_matches_size(self):
        for space, deg in [
            (P2, d(4)),
            (P2xP1, d(2, 3)),
            (AmbientSpace((1, 1, 1)), d(2, 1, 2)),
        ]:
            assert len(monomial_basis(space, deg)) == basis_size(space, deg)

    def test_order_is_stable(self):
        a = monomial_basis(P2, d(3))
        b = monomial_basis(P2, d(3))
        assert a.exponents == b.exponents


class TestTraceResidual:
    def test_hyperplane_trace(self):
        space, deg = trace_system(P3, d(4), HYP)
        assert space == P2 and deg == d(4)

    def test_factor_point_trace(self):
        div = DivisorSpec(1, DivisorKind.FACTOR_POINT)
        space, deg = trace_system(P2xP1, d(3, 3), div)
        assert space == P2 and deg == d(3)

    def test_hyperplane_on_p1_factor_rejected(self):
        with pytest.raises(ValueError):
            trace_system(P1xP1, d(4, 4), HYP)

    def test_factor_point_needs_p1(self):
        with pytest.raises(ValueError):
            trace_system(P2xP1, d(3, 3), DivisorSpec(0, DivisorKind.FACTOR_POINT))

    def test_hyperplane_residual(self):
        space, deg = residual_system(P3, d(4), HYP)
        assert space == P3 and deg == d(3)

    def test_factor_point_residual(self):
        div = DivisorSpec(1, DivisorKind.FACTOR_POINT)
        space, deg = residual_system(P2xP1, d(3, 3), div)
        assert space == P2xP1 and deg == d(3, 2)

    def test_degree_zero_residual_rejected(self):
        with pytest.raises(ValueError):
            residual_system(P2, d(0), HYP)

    def test_pascal_identity_single_factor(self):
        # N(space) = N(trace) + N(residual) for hyperplanes on one factor
        for n in range(2, 7):
            for t in range(1, 9):
                space = AmbientSpace((n,))
                ts, td = trace_system(space, d(t), HYP)
                rs, rd = residual_system(space, d(t), HYP)
                assert basis_size(space, d(t)) == basis_size(ts, td) + basis_size(rs, rd)

    def test_kunneth_identity_factor_point(self):
        # N(space) = N(trace) * (d_k + 1) for a P^1 factor slice
        for dims, degs, k in [
            ((2, 1), (3, 3), 1),
            ((1, 1), (4, 4), 0),
            ((1, 1, 1), (2, 3, 4), 2),
        ]:
            space, deg = AmbientSpace(dims), Multidegree(degs)
            div = DivisorSpec(k, DivisorKind.FACTOR_POINT)
            ts, td = trace_system(space, deg, div)
            assert basis_size(space, deg) == basis_size(ts, td) * (degs[k] + 1)
