"""Tests for the Mayer-Vietoris homology pipeline and class lookups."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cobcalc.abelian import CircleValue, FGAbelianGroup
from cobcalc.homology import (
    GENERATOR_NAMES,
    H2Class,
    TORSION_WALL_X,
    class_of_fiber,
    class_of_lift_x,
    class_of_lift_y,
    class_of_section,
    compute_h2_twisted,
    h3_to_h1_projection,
    h3_two_torsion,
)
from cobcalc.tropical import SectionClass

F = Fraction


def sec(m, n, l, theta=F(0)):
    return SectionClass(m, n, l, CircleValue(F(theta)))


def test_group_shape():
    h2 = compute_h2_twisted()
    assert h2.group == FGAbelianGroup(free_rank=4, torsion=(2,))
    assert h2.generators == GENERATOR_NAMES


def test_intermediate_shapes():
    h2 = compute_h2_twisted()
    # quotient of the chart groups: Z + Z/2 + Z
    assert h2.chart_quotient == FGAbelianGroup(free_rank=2, torsion=(2,))
    # kernel of the degree-one overlap map: Z^2
    assert h2.overlap_kernel == FGAbelianGroup(free_rank=2, torsion=())


def test_deterministic():
    assert compute_h2_twisted() == compute_h2_twisted()


def test_zero_section_class():
    assert class_of_section(sec(0, 0, 0, F(1, 3))) == H2Class(0, 1, 0, 0, 0)


def test_general_section_class():
    assert class_of_section(sec(2, 3, 1, F(1, 4))) == H2Class(6, 1, 2, 3, 1)


def test_negative_section_class():
    assert class_of_section(sec(-1, 1, 0)) == H2Class(-1, 1, -1, 1, 0)


def test_theta_independence():
    thetas = [F(0), F(1, 4), F(1, 3), F(1, 2)]
    classes = {class_of_section(sec(2, -1, 1, t)) for t in thetas}
    assert len(classes) == 1


def test_lookup_classes():
    assert class_of_fiber() == H2Class(1, 0, 0, 0, 0)
    assert class_of_lift_x(3) == H2Class(0, 0, 3, 0, 0)
    assert class_of_lift_y(0, 1) == H2Class(0, 0, 0, 0, 1)
    assert class_of_lift_y(2, 3) == H2Class(0, 0, 0, 2, 1)


def test_lookups_hit_standard_basis():
    h2 = compute_h2_twisted()
    assert h2.element_of(class_of_fiber()) == h2.basis_element("fiber")
    assert h2.element_of(class_of_lift_x(1)) == h2.basis_element("vertical_conormal")
    assert h2.element_of(class_of_lift_y(1, 0)) == h2.basis_element("horizontal_conormal")
    assert h2.element_of(class_of_lift_y(0, 1)) == h2.basis_element(
        "horizontal_conormal_difference"
    )
    assert h2.element_of(class_of_section(sec(0, 0, 0))) == h2.basis_element("zero_section")


@pytest.mark.parametrize("m", range(-5, 6))
@pytest.mark.parametrize("n", range(-5, 6))
@pytest.mark.parametrize("l", (0, 1))
def test_section_class_additivity(m, n, l):
    total = (
        m * n * class_of_fiber()
        + class_of_section(sec(0, 0, 0))
        + class_of_lift_x(m)
        + class_of_lift_y(n, l)
    )
    assert class_of_section(sec(m, n, l, F(1, 3))) == total


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_h2class_arithmetic_is_componentwise(a, b, c):
    x = H2Class(a, b, c, a + b, a)
    y = H2Class(c, a, b, a - c, b)
    s = x + y
    assert (s.a, s.b, s.m, s.n) == (a + c, b + a, c + b, 2 * a + b - c)
    assert s.l == (a + b) % 2
    assert 2 * x == x + x


def test_torsion_residue_reduced():
    assert H2Class(0, 0, 0, 0, 5).l == 1
    assert H2Class(0, 0, 0, 0, -4).l == 0


def test_h3_two_torsion():
    g = h3_two_torsion()
    assert g == FGAbelianGroup(free_rank=0, torsion=(2,))
    gen = g.generator(0)
    assert not gen.is_zero()
    assert (2 * gen).is_zero()
    assert TORSION_WALL_X == F(1, 2)


def test_h3_projection():
    pr = h3_to_h1_projection()
    assert pr.codomain == FGAbelianGroup(free_rank=1, torsion=(2,))
    # the swept-section class hits the free base circle generator
    assert pr(pr.domain.generator(0)) == pr.codomain.generator(0)
    # fiberwise classes die
    assert pr(pr.domain.generator(1)).is_zero()
    assert pr(pr.domain.generator(2)).is_zero()
    assert pr(pr.domain.zero()).is_zero()
