"""Tests for the Chow/K0 side: pinned products, the quasi-linear map, chern, h."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cobcalc.abelian import (
    CircleValue,
    FGAbelianGroup,
    IntegerMatrix,
    smith_normal_form,
)
from cobcalc.chow_k0 import (
    BlockMapNotQuasilinear,
    ChowClass,
    DivisorClass,
    EllipticModel,
    IntersectionTable,
    K0Class,
    MissingTableEntry,
    PointClass,
    bielliptic_blocks,
    build_quasilinear,
    chern,
    chern_correction,
    h_inverse,
    h_map,
    intersect,
)

F = Fraction
G = FGAbelianGroup(free_rank=1, torsion=(4,))
E = G.zero()
FREE = G.element((1, 0))
TOR = G.element((0, 1))
ZERO = EllipticModel.zero(G)


def cv(value) -> CircleValue:
    return CircleValue(F(value))


def ep(angle, twist=E) -> EllipticModel:
    return EllipticModel(cv(angle), twist)


def dv(fiber=0, half=0, ta=0, tb=0, pic0=ZERO) -> DivisorClass:
    return DivisorClass(fiber, half, ta, tb, pic0)


def pc(degree=0, alb=ZERO) -> PointClass:
    return PointClass(degree, alb)


D_FIBER = dv(fiber=1)
D_HALF = dv(half=1)
D_TOR_A = dv(ta=1)
D_TOR_B = dv(tb=1)

BARE = IntersectionTable(G)
P = BARE.half_point

# Every mixed product fixed to something, so bilinear expansion never
# hits a missing entry; torsion rows get honest 2-torsion values.
FULL = IntersectionTable(
    G,
    cross={
        ("fiber", "half_fiber"): 1,
        ("fiber", "tor_a"): pc(0, ep(F(1, 2))),
        ("fiber", "tor_b"): 0,
        ("half_fiber", "tor_a"): 0,
        ("half_fiber", "tor_b"): pc(0, ep(0, 2 * TOR)),
        ("tor_a", "tor_b"): pc(0, ep(F(1, 2), 2 * TOR)),
    },
    pic0_cross={"fiber": 1, "half_fiber": -2, "tor_a": 0, "tor_b": 0},
)


# ---------------------------------------------------------------- values


class TestEllipticModel:
    def test_componentwise_addition(self):
        assert ep(F(3, 4), FREE) + ep(F(1, 2), TOR) == ep(F(1, 4), FREE + TOR)

    def test_integer_scaling_and_negation(self):
        x = ep(F(1, 3), TOR)
        assert 3 * x == ep(0, 3 * TOR)
        assert x + (-x) == ZERO
        assert x - x == ZERO

    def test_angle_coerced_from_rational(self):
        assert EllipticModel(F(5, 4), E).angle == cv(F(1, 4))

    def test_mismatched_groups_fail(self):
        other = FGAbelianGroup(free_rank=0, torsion=(2,))
        with pytest.raises(ValueError):
            ep(0, E) + EllipticModel.zero(other)

    def test_zero_recognition(self):
        assert ZERO.is_zero()
        assert not ep(F(1, 2)).is_zero()


class TestCoordinateReduction:
    def test_divisor_torsion_residues(self):
        d = dv(ta=3, tb=-1)
        assert (d.tor_a, d.tor_b) == (1, 1)

    def test_divisor_sum_reduces(self):
        assert D_TOR_A + D_TOR_A == dv()

    def test_k0_torsion_residues(self):
        k = K0Class(0, 0, 0, 0, 5, 2, ZERO, ZERO)
        assert (k.n5, k.n6) == (1, 0)

    def test_k0_doubling_kills_torsion(self):
        k = K0Class(0, 0, 0, 0, 1, 1, ZERO, ZERO)
        assert (2 * k).is_zero()

    def test_point_degree_must_be_integer(self):
        with pytest.raises(ValueError):
            PointClass(F(1, 2), ZERO)

    def test_chow_parts_must_share_group(self):
        other = FGAbelianGroup(free_rank=0, torsion=(2,))
        with pytest.raises(ValueError):
            ChowClass(0, dv(), PointClass.zero(other))

    def test_k0_parameters_must_share_group(self):
        other = FGAbelianGroup(free_rank=0, torsion=(2,))
        with pytest.raises(ValueError):
            K0Class(0, 0, 0, 0, 0, 0, ZERO, EllipticModel.zero(other))


# ----------------------------------------------------------------- table


class TestIntersectionTable:
    def test_default_half_class(self):
        assert P == ep(F(1, 4))

    def test_pinned_squares(self):
        assert BARE.square("fiber").is_zero()
        assert BARE.square("tor_a").is_zero()
        assert BARE.square("tor_b").is_zero()
        assert BARE.square("half_fiber") == pc(0, 2 * P)

    def test_half_square_is_twice_the_half_class(self):
        assert intersect(D_HALF, D_HALF, BARE) == pc(0, ep(F(1, 2)))

    def test_free_generator_squares_vanish(self):
        assert intersect(D_FIBER, D_FIBER, BARE).is_zero()
        assert intersect(D_TOR_A, D_TOR_A, BARE).is_zero()
        assert intersect(D_TOR_B, D_TOR_B, BARE).is_zero()

    def test_picard_self_pairing_is_pinned_to_zero(self):
        u = dv(pic0=ep(F(1, 3), FREE))
        v = dv(pic0=ep(F(1, 7), TOR))
        assert intersect(u, v, BARE).is_zero()

    def test_custom_half_class(self):
        table = IntersectionTable(G, half_point=ep(F(1, 4), TOR))
        assert table.square("half_fiber") == pc(0, ep(F(1, 2), 2 * TOR))

    def test_half_class_must_be_four_torsion(self):
        with pytest.raises(ValueError, match="2-torsion"):
            IntersectionTable(G, half_point=ep(F(1, 3)))

    def test_half_class_must_live_over_the_group(self):
        other = FGAbelianGroup(free_rank=0, torsion=(2,))
        with pytest.raises(ValueError):
            IntersectionTable(G, half_point=EllipticModel.zero(other))

    def test_squares_cannot_be_configured(self):
        with pytest.raises(ValueError, match="cannot be configured"):
            IntersectionTable(G, cross={("fiber", "fiber"): 0})

    def test_unknown_slot_rejected(self):
        with pytest.raises(ValueError, match="unknown divisor slot"):
            IntersectionTable(G, cross={("fiber", "canonical"): 0})
        with pytest.raises(ValueError, match="unknown divisor slot"):
            IntersectionTable(G, pic0_cross={"canonical": 0})

    def test_torsion_rows_must_be_two_torsion(self):
        with pytest.raises(ValueError, match="2-torsion"):
            IntersectionTable(G, cross={("fiber", "tor_a"): 1})
        with pytest.raises(ValueError, match="2-torsion"):
            IntersectionTable(G, cross={("fiber", "tor_a"): pc(0, ep(F(1, 3)))})

    def test_torsion_rows_accept_two_torsion_values(self):
        table = IntersectionTable(G, cross={("fiber", "tor_a"): pc(0, ep(F(1, 2)))})
        assert intersect(D_FIBER, D_TOR_A, table) == pc(0, ep(F(1, 2)))

    def test_picard_against_torsion_only_trivial(self):
        with pytest.raises(ValueError, match="only trivially"):
            IntersectionTable(G, pic0_cross={"tor_a": 1})
        IntersectionTable(G, pic0_cross={"tor_a": 0})

    def test_missing_mixed_product(self):
        with pytest.raises(MissingTableEntry, match="fiber and half_fiber"):
            intersect(D_FIBER, D_HALF, BARE)

    def test_missing_picard_product(self):
        with pytest.raises(MissingTableEntry, match="Picard part and fiber"):
            intersect(dv(pic0=ep(F(1, 3))), D_FIBER, BARE)

    def test_unused_entries_are_never_looked_up(self):
        # zero coefficients must not trip MissingTableEntry
        assert intersect(dv(fiber=2), dv(fiber=-1), BARE) == pc(0)

    def test_integer_entries_mean_reference_points(self):
        assert intersect(D_FIBER, D_HALF, FULL) == pc(1)

    def test_picard_scaling(self):
        rho = ep(F(1, 8), FREE)
        assert intersect(dv(pic0=rho), D_FIBER, FULL) == pc(0, rho)
        assert intersect(dv(pic0=rho), D_HALF, FULL) == pc(0, -2 * rho)

    def test_group_mismatch_rejected(self):
        other = FGAbelianGroup(free_rank=0, torsion=(2,))
        with pytest.raises(ValueError):
            intersect(DivisorClass.zero(other), dv(), BARE)


angles = st.fractions(min_value=0, max_value=F(7, 8), max_denominator=8).map(cv)
twists = st.tuples(st.integers(-2, 2), st.integers(0, 3)).map(G.element)
points = st.builds(EllipticModel, angles, twists)
divisors = st.builds(
    DivisorClass,
    st.integers(-3, 3),
    st.integers(-3, 3),
    st.integers(0, 1),
    st.integers(0, 1),
    points,
)
point_classes = st.builds(PointClass, st.integers(-3, 3), points)
k0_classes = st.builds(
    K0Class,
    st.integers(-3, 3),
    st.integers(-3, 3),
    st.integers(-3, 3),
    st.integers(-3, 3),
    st.integers(0, 1),
    st.integers(0, 1),
    points,
    points,
)


class TestIntersectProperties:
    @settings(deadline=None)
    @given(divisors, divisors)
    def test_symmetric(self, u, v):
        assert intersect(u, v, FULL) == intersect(v, u, FULL)

    @settings(deadline=None)
    @given(divisors, divisors, divisors)
    def test_bilinear(self, u, w, v):
        lhs = intersect(u + w, v, FULL)
        assert lhs == intersect(u, v, FULL) + intersect(w, v, FULL)

    @settings(deadline=None)
    @given(divisors)
    def test_products_against_torsion_are_two_torsion(self, u):
        for t in (D_TOR_A, D_TOR_B):
            assert (2 * intersect(u, t, FULL)).is_zero()


# ----------------------------------------------------- quasi-linear maps


def reference_correction(v: DivisorClass, table: IntersectionTable) -> PointClass:
    """Independent oracle: fold the defining identity one block at a time.

    H(w + part) = H(w) + H(part) + w.part reconstructs H on any divisor
    from the per-block values alone, without the mixed-product formula.
    """
    blocks = [
        (dv(fiber=v.fiber), pc(0)),
        (dv(half=v.half_fiber), pc(0, (v.half_fiber ** 2) * table.half_point)),
        (dv(ta=v.tor_a), pc(0)),
        (dv(tb=v.tor_b), pc(0)),
        (dv(pic0=v.pic0), pc(0)),
    ]
    total = pc(0)
    accumulated = dv()
    for part, value in blocks:
        total = total + value + intersect(accumulated, part, table)
        accumulated = accumulated + part
    return total


class TestBuildQuasilinear:
    def test_zero_blocks_zero_product_give_zero_map(self):
        def vanish(_):
            return pc(0)

        h = build_quasilinear([vanish] * 5, lambda u, v: pc(0), G)
        assert h(dv(2, -1, 1, 0, ep(F(1, 3), FREE))).is_zero()

    @pytest.mark.parametrize("m", range(-3, 4))
    def test_half_fiber_powers(self, m):
        h = chern_correction(BARE)
        assert h(dv(half=m)) == pc(0, (m * m) * P)

    def test_mixed_free_generators(self):
        # expansion of the two-block case: the half square plus one cross term
        h = chern_correction(FULL)
        assert h(D_FIBER + D_HALF) == pc(0, P) + pc(1)

    @settings(deadline=None)
    @given(divisors)
    def test_agrees_with_block_folding_oracle(self, v):
        assert chern_correction(FULL)(v) == reference_correction(v, FULL)

    @settings(deadline=None)
    @given(divisors, divisors)
    def test_quasilinear_identity(self, a, b):
        h = chern_correction(FULL)
        assert h(a + b) == h(a) + h(b) + intersect(a, b, FULL)

    def test_rejects_bad_block_map(self):
        def cubic(v):
            return pc(v.fiber ** 3)

        def vanish(_):
            return pc(0)

        blocks = (cubic, vanish, vanish, vanish, vanish)
        with pytest.raises(BlockMapNotQuasilinear, match="fiber"):
            build_quasilinear(blocks, lambda u, v: intersect(u, v, BARE), G)

    def test_rejects_wrong_block_count(self):
        with pytest.raises(ValueError, match="one block map per divisor slot"):
            build_quasilinear([lambda v: pc(0)] * 3, lambda u, v: pc(0), G)

    def test_bielliptic_blocks_pass_validation_on_bare_table(self):
        # single-slot sampling needs squares only, never a mixed entry
        chern_correction(BARE)


# ------------------------------------------------------- chern character


class TestChern:
    def test_structure_sheaf(self):
        assert chern(1, dv(), pc(0), BARE) == ChowClass(1, dv(), pc(0))

    def test_skyscraper_with_sign_convention(self):
        point = pc(1, ep(F(1, 3), TOR))
        assert chern(0, dv(), -point, BARE) == ChowClass(0, dv(), point)

    def test_line_bundle_shape(self):
        div = dv(half=2)
        assert chern(1, div, pc(0), BARE) == ChowClass(1, div, pc(0, 4 * P))

    @settings(deadline=None)
    @given(
        st.integers(-3, 3), divisors, point_classes,
        st.integers(-3, 3), divisors, point_classes,
    )
    def test_additive_under_direct_sum(self, r1, c1, z1, r2, c2, z2):
        # Whitney: the direct sum's second Chern class picks up c1(F1).c1(F2)
        combined = chern(
            r1 + r2, c1 + c2, z1 + z2 + intersect(c1, c2, FULL), FULL
        )
        assert combined == chern(r1, c1, z1, FULL) + chern(r2, c2, z2, FULL)

    def test_group_mismatch_rejected(self):
        other = FGAbelianGroup(free_rank=0, torsion=(2,))
        with pytest.raises(ValueError):
            chern(0, DivisorClass.zero(other), PointClass.zero(other), BARE)


# ------------------------------------------------- generator presentation


class TestHMap:
    def test_fundamental_class(self):
        k = K0Class(1, 0, 0, 0, 0, 0, ZERO, ZERO)
        assert h_map(k, BARE) == ChowClass(1, dv(), pc(0))

    def test_reference_point(self):
        k = K0Class(0, 1, 0, 0, 0, 0, ZERO, ZERO)
        assert h_map(k, BARE) == ChowClass(0, dv(), pc(1))

    def test_free_divisor_generators(self):
        k = K0Class(0, 0, 1, 0, 0, 0, ZERO, ZERO)
        assert h_map(k, BARE) == ChowClass(0, D_FIBER, pc(0))

    def test_half_fiber_drags_the_half_class(self):
        k = K0Class(0, 0, 0, 1, 0, 0, ZERO, ZERO)
        assert h_map(k, BARE) == ChowClass(0, D_HALF, pc(0, P))

    def test_torsion_generators(self):
        k = K0Class(0, 0, 0, 0, 1, 1, ZERO, ZERO)
        assert h_map(k, BARE) == ChowClass(0, D_TOR_A + D_TOR_B, pc(0))

    def test_doubled_torsion_generator_dies(self):
        k = K0Class(0, 0, 0, 0, 1, 0, ZERO, ZERO)
        assert h_map(2 * k, BARE).is_zero()

    def test_elliptic_parameters(self):
        p, q = ep(F(1, 3), FREE), ep(F(1, 8), TOR)
        k = K0Class(0, 0, 0, 0, 0, 0, p, q)
        assert h_map(k, BARE) == ChowClass(0, dv(pic0=p), pc(0, q))

    @settings(deadline=None)
    @given(k0_classes, k0_classes)
    def test_additive(self, a, b):
        assert h_map(a + b, BARE) == h_map(a, BARE) + h_map(b, BARE)

    @settings(deadline=None)
    @given(k0_classes)
    def test_left_inverse(self, k):
        assert h_inverse(h_map(k, BARE), BARE) == k

    @settings(deadline=None)
    @given(st.integers(-3, 3), divisors, point_classes)
    def test_right_inverse(self, ch2, ch1, ch0):
        c = ChowClass(ch2, ch1, ch0)
        assert h_map(h_inverse(c, BARE), BARE) == c

    def test_free_part_matrix_is_unimodular(self):
        columns = []
        for unit in (
            K0Class(1, 0, 0, 0, 0, 0, ZERO, ZERO),
            K0Class(0, 1, 0, 0, 0, 0, ZERO, ZERO),
            K0Class(0, 0, 1, 0, 0, 0, ZERO, ZERO),
            K0Class(0, 0, 0, 1, 0, 0, ZERO, ZERO),
        ):
            image = h_map(unit, BARE)
            columns.append(
                (
                    image.ch2,
                    image.ch1.fiber,
                    image.ch1.half_fiber,
                    image.ch0.degree,
                )
            )
        matrix = IntegerMatrix.from_columns(columns)
        _, s, _ = smith_normal_form(matrix)
        assert [s.entry(i, i) for i in range(4)] == [1, 1, 1, 1]

    def test_torsion_part_exhaustive(self):
        seen = set()
        for n5 in (0, 1):
            for n6 in (0, 1):
                image = h_map(K0Class(0, 0, 0, 0, n5, n6, ZERO, ZERO), BARE)
                assert (image.ch1.tor_a, image.ch1.tor_b) == (n5, n6)
                seen.add((image.ch1.tor_a, image.ch1.tor_b))
        assert len(seen) == 4

    def test_respects_custom_half_class(self):
        table = IntersectionTable(G, half_point=ep(F(3, 4), 2 * TOR))
        k = K0Class(0, 0, 0, 3, 0, 0, ZERO, ZERO)
        assert h_map(k, table).ch0.alb == 3 * table.half_point
        assert h_inverse(h_map(k, table), table) == k

    def test_group_mismatch_rejected(self):
        other = FGAbelianGroup(free_rank=0, torsion=(2,))
        with pytest.raises(ValueError):
            h_map(K0Class.zero(other), BARE)
