"""Graded modules over k[z, w] and their splitting types."""

import pytest

from app.errors import ContainmentError, NotFreeError
from app.field import PrimeField
from app.graded import GradedIdeal
from app.line_modules import (
    FreeLineModule,
    image_module,
    module_of,
    quotient_module,
    splitting_type,
    torsion_free_twists,
    torsion_saturate,
)
from app.polynomials import constant, variables

F = PrimeField(32003)
x, y, z, w = variables(F)
TOP = 10


def test_neighborhood_free_module():
    free = FreeLineModule.neighborhood(3)
    assert free.rank == 6
    assert sorted(free.degrees) == [0, 1, 1, 2, 2, 2]
    assert [free.dim(n) for n in range(4)] == [1, 4, 10, 16]
    assert free.dual().degrees == tuple(-d for d in free.degrees)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_structure_sheaf_of_a_neighborhood_splits(d):
    unit = GradedIdeal([constant(F, 1)], F, label="S")
    module = image_module(unit, d, d + 8)
    expected = sorted((-i for i in range(d) for _ in range(i + 1)), reverse=True)
    assert list(splitting_type(module).twists) == expected


def test_double_line_module_is_a_single_twist(doubles):
    for a, curve in doubles.items():
        module = module_of(curve.ideal, 2, curve.window)
        split = splitting_type(module)
        assert split.twists == (-(a + 2),)
        assert split.free_certificate and split.rank == 1


def test_triple_module_splitting(triple01):
    module = module_of(triple01.ideal, 3, triple01.window)
    assert splitting_type(module).matches([-3, -3, -3])


def test_module_of_needs_the_neighborhood(doubles):
    with pytest.raises(ContainmentError):
        module_of(doubles[0].ideal, 1, TOP)


def test_non_free_module_is_rejected():
    ideal = GradedIdeal([x, y * z, y * w], F, label="(x, yz, yw)")
    with pytest.raises(NotFreeError):
        splitting_type(image_module(ideal, 2, TOP))


def test_torsion_saturation_recovers_the_double_line(triple01):
    image = image_module(triple01.ideal, 2, triple01.window)
    saturated = torsion_saturate(image)
    assert saturated.contains_module(image)
    double = triple01.filtration[1]
    expected = image_module(double, 2, triple01.window)
    assert saturated.same_as(expected)


def test_torsion_free_twists_of_a_line_quotient(the_line):
    module = image_module(the_line.ideal, 2, the_line.window)
    twists = torsion_free_twists(module)
    assert twists.modulo_torsion
    assert twists.rank == 1


def test_quotient_dimensions_subtract(triple01):
    top = triple01.window
    numerator = module_of(triple01.filtration[1], 3, top)
    relations = module_of(triple01.ideal, 3, top)
    quotient = quotient_module(numerator, relations)
    assert [quotient.dim(n) for n in range(top + 1)] == [
        numerator.dim(n) - relations.dim(n) for n in range(top + 1)
    ]
    with pytest.raises(ContainmentError):
        quotient_module(relations, numerator)
