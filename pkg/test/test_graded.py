"""Degreewise ideals: slices, Hilbert data, saturation and intersections."""

import numpy as np
import pytest

from app.errors import WindowTooSmallError
from app.field import PrimeField
from app.graded import (
    EMPTY_FLOOR,
    GradedIdeal,
    MonomialFloor,
    ambient_dimension,
    line_power,
    second_line_power,
)
from app.polynomials import LINE_SWAP, constant, monomial, monomials_of_degree, variables

F = PrimeField(32003)
x, y, z, w = variables(F)
TOP = 8


def test_floor_dimensions_match_the_neighborhood():
    floor = line_power(2)
    assert floor.generators == ((2, 0, 0, 0), (1, 1, 0, 0), (0, 2, 0, 0))
    for n in range(6):
        assert floor.width(n) == ambient_dimension(n) - floor.dimension(n)
    assert [floor.width(n) for n in range(4)] == [1, 4, 7, 10]


def test_floor_algebra():
    assert line_power(1).product(line_power(1)) == line_power(2)
    assert line_power(2).line_power_exponent() == 2
    assert second_line_power(1).line_power_exponent() is None
    assert line_power(3).permute(LINE_SWAP) == second_line_power(3)
    assert MonomialFloor([(1, 0, 0, 0), (2, 1, 0, 0)]).generators == ((1, 0, 0, 0),)


@pytest.mark.parametrize("d,constant_term", [(1, 1), (2, 1), (3, -2)])
def test_neighborhood_hilbert_polynomials(d, constant_term):
    ideal = GradedIdeal([], F, floor=line_power(d), label=f"L_{d}")
    h = ideal.hilbert_polynomial(TOP)
    assert h.degree == d * (d + 1) // 2
    assert h.constant == constant_term


def test_slices_follow_generators():
    ideal = GradedIdeal([x, y], F)
    assert [ideal.dim(n) for n in range(4)] == [0, 2, 7, 16]
    assert ideal.hilbert_function((0, 4)) == [1, 2, 3, 4, 5]
    assert ideal.min_surface_degree(TOP) == 1
    assert ideal.contains_form(x * z + y * w)
    assert not ideal.contains_form(z)


def test_unit_ideal_has_no_room():
    unit = GradedIdeal([constant(F, 1)], F)
    assert unit.codim(5) == 0


def test_saturation_removes_the_irrelevant_component():
    maximal = [x, y, z, w]
    ideal = GradedIdeal([u * v for u in (x, y) for v in maximal], F, label="embedded")
    assert not ideal.contains_form(x)
    saturated = ideal.saturate(TOP)
    assert saturated.is_saturated
    assert saturated.contains_form(x) and saturated.contains_form(y)
    assert saturated.same_as(GradedIdeal([x, y], F), TOP)


def test_saturation_certificate_needs_room():
    cubics = [monomial(F, m) for m in monomials_of_degree(3)]
    ideal = GradedIdeal([u * v for u in (x, y) for v in cubics], F)
    with pytest.raises(WindowTooSmallError):
        ideal.saturate(5)
    assert ideal.saturate(TOP).contains_form(x)


def test_two_skew_lines():
    first = GradedIdeal([x, y], F).saturate(TOP)
    second = GradedIdeal([z, w], F).saturate(TOP)
    union = first.intersect(second, TOP)
    h = union.hilbert_polynomial(TOP)
    assert (h.degree, h.genus) == (2, -1)
    assert union.dim(1) == 0 and union.dim(2) == 4
    assert union.contains_form(x * z) and not union.contains_form(x * x)


def test_floor_free_and_floored_ideals_agree():
    floored = GradedIdeal([x * w - y * z], F, floor=line_power(2))
    plain = GradedIdeal([x * x, x * y, y * y, x * w - y * z], F)
    assert floored.same_as(plain, 5)
    assert floored.hilbert_polynomial(TOP) == plain.hilbert_polynomial(TOP)


def test_canonical_generators_ignore_presentation():
    one = GradedIdeal([x, y, z * z], F)
    other = GradedIdeal([x + y, x - y, z * z + x * w], F)
    assert one.canonical_generators() == other.canonical_generators()
    assert len(one.canonical_generators()) == 3


def test_random_elements_lie_in_the_ideal():
    ideal = GradedIdeal([x * w - y * z], F, floor=line_power(2))
    rng = np.random.default_rng(3)
    for n in (2, 3, 4):
        assert ideal.contains_form(ideal.random_element(n, rng))


def test_permute_moves_the_floor():
    ideal = GradedIdeal([x * w - y * z], F, floor=line_power(2)).permute(LINE_SWAP)
    assert ideal.floor == second_line_power(2)
    assert ideal.contains_form(z * y - w * x)
    assert ideal.contains_form(w * w) and not ideal.contains_form(x * x)


def test_extend_over_a_smaller_floor():
    base = GradedIdeal([], F, floor=line_power(2))
    bigger = base.extend([x * z], floor=line_power(3))
    assert bigger.floor == line_power(3)
    assert bigger.contains_form(x * y) and bigger.contains_form(x * z)
    assert EMPTY_FLOOR.width(2) == ambient_dimension(2)
