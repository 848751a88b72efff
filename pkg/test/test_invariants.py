"""Closed forms, the condition at (d, l) and the C_(d,l) predicate."""

import pytest
from hypothesis import given, strategies as st

from app.errors import ContainmentError, DegreeMismatchError, UnsupportedSpecError
from app.invariants import (
    admissible_types,
    beorchia_bound,
    cdl_genus,
    check_condition,
    choose,
    describe,
    family_dimension,
    genus_bound_check,
    genus_from_splitting,
    is_cdl,
    maximum_genus_families,
    min_surface_degree,
    neighborhood_genus,
    numerology_discrepancies,
    qp_genus,
)
from app.models import FamilyKind, FamilySpec, QPType


@pytest.mark.parametrize("d,s,expected", [(2, 2, -1), (3, 3, -3), (4, 4, -7), (5, 5, -14), (7, 3, 6)])
def test_beorchia_bound(d, s, expected):
    assert beorchia_bound(d, s) == expected


def test_beorchia_bound_rejects_s_above_d():
    with pytest.raises(ValueError):
        beorchia_bound(3, 4)


@pytest.mark.parametrize("d,ell,expected", [(1, 0, 0), (1, 5, 0), (4, 0, -7), (3, 1, -6), (4, 1, -13)])
def test_cdl_genus(d, ell, expected):
    assert cdl_genus(d, ell) == expected


@given(st.integers(min_value=1, max_value=12), st.integers(min_value=0, max_value=6))
def test_cdl_genus_is_the_bound_minus_a_multiple(d, ell):
    assert cdl_genus(d, ell) == beorchia_bound(d, d) - ell * choose(d, 2)
    assert cdl_genus(d, ell + 1) <= cdl_genus(d, ell)


@given(st.integers(min_value=0, max_value=5), st.lists(st.integers(min_value=0, max_value=4), max_size=3))
def test_primitive_types_meet_the_genus_formula(a, tail):
    qp = QPType(a=a, b=(0,) * len(tail))
    d = qp.degree
    assert qp_genus(qp, d) == -(d - 1) - a * d * (d - 1) // 2


def test_qp_genus_examples():
    assert [qp_genus(QPType(a=a)) for a in range(3)] == [-1, -2, -3]
    assert qp_genus(QPType(a=0, b=(1,)), 3) == -3
    assert qp_genus(QPType(a=1, b=(0, 0, 0)), 5) == -14
    with pytest.raises(DegreeMismatchError):
        qp_genus(QPType(a=0, b=(1,)), 4)


def test_types_must_be_superadditive():
    with pytest.raises(ValueError):
        QPType(a=0, b=(3, 2))


def test_neighborhood_and_splitting_genus():
    assert [neighborhood_genus(d) for d in (1, 2, 3)] == [0, 0, 3]
    assert genus_from_splitting([-3, -3, -3], 3) == -3
    assert genus_from_splitting([-4] * 6, 4) == -7


@pytest.mark.parametrize("spec,expected", [
    (FamilySpec(kind=FamilyKind.PRIMITIVE, d=2, a=3), 13),
    (FamilySpec(kind=FamilyKind.TRIPLE, a=1, b=1), 17),
    (FamilySpec(kind=FamilyKind.QUADRUPLE, a=1, b=2, c=2), 30),
    (FamilySpec(kind=FamilyKind.PRIMITIVE, d=5, a=1), 30),
    (FamilySpec(kind=FamilyKind.LINE), 4),
    (FamilySpec(kind=FamilyKind.UNION, parts=[FamilySpec(kind=FamilyKind.PRIMITIVE, d=2, a=2)] * 2), 22),
])
def test_family_dimension(spec, expected):
    assert family_dimension(spec) == expected


def test_family_dimension_rejects_incomplete_specs():
    with pytest.raises(UnsupportedSpecError):
        family_dimension(FamilySpec(kind=FamilyKind.TRIPLE, a=1))
    with pytest.raises(UnsupportedSpecError):
        family_dimension(FamilySpec(kind=FamilyKind.UNION, parts=[FamilySpec(kind=FamilyKind.LINE)]))


@pytest.mark.parametrize("d,dims", [(2, [7, 8]), (3, [12, 13]), (4, [21, 21, 22]), (5, [30, 34, 35])])
def test_maximum_genus_families(d, dims):
    assert sorted(m.dimension for m in maximum_genus_families(d)) == dims
    with pytest.raises(UnsupportedSpecError):
        maximum_genus_families(6)


def test_admissible_types():
    assert admissible_types(3, 2) == [QPType(a=2, b=(1,))]
    assert [t.b for t in admissible_types(4, 0)] == [(0, 4), (1, 3), (2, 2)]
    assert admissible_types(4, 1, apply_subcurve_filters=True) == [QPType(a=1, b=(2, 2))]
    filtered = admissible_types(5, 0, apply_subcurve_filters=True)
    assert QPType(a=1, b=(0, 0, 0)) in filtered
    assert numerology_discrepancies(5, 0) == [QPType(a=0, b=(2, 4, 4))]
    assert numerology_discrepancies(4, 0) == []


def test_condition_on_double_lines(doubles):
    for a, curve in doubles.items():
        for ell in range(4):
            assert check_condition(curve, 2, ell) == (ell <= a)


def test_condition_degree_must_match(doubles):
    with pytest.raises(DegreeMismatchError):
        check_condition(doubles[0], 3, 0)


def test_line_is_cdl_for_every_ell(the_line):
    for ell in range(4):
        assert is_cdl(the_line, 1, ell).is_cdl
    assert min_surface_degree(the_line) == 1


def test_double_line_criteria_agree(doubles):
    report = is_cdl(doubles[1], 2, 1)
    assert report.is_cdl
    assert report.cdl_flags == {"h0": True, "h1": True, "splitting": True}
    report = is_cdl(doubles[1], 2, 0)
    assert not report.is_cdl
    assert set(report.cdl_flags.values()) == {False}


def test_triple_classification(triple01, triple02, primitive31):
    assert is_cdl(triple01, 3, 0).is_cdl
    assert check_condition(triple02, 3, 0)
    assert not is_cdl(triple02, 3, 0).is_cdl
    assert not is_cdl(primitive31, 3, 0).is_cdl
    assert min_surface_degree(triple01) == 3


def test_good_quadruple_is_cdl(quadruple022):
    report = is_cdl(quadruple022, 4, 0)
    assert report.is_cdl
    assert report.splitting.matches([-4] * 6)
    assert report.s_value == 4


def test_describe_reports_every_condition(doubles):
    report = describe(doubles[1])
    assert report.condition_flags == {"2,0": True, "2,1": True, "2,2": False, "2,3": False}
    assert report.qp_type == QPType(a=1)
    assert report.quasiprimitive
    assert report.certification.field_char == 32003
    assert report.ell is None and report.is_cdl is None


def test_genus_bound(doubles):
    assert genus_bound_check(doubles[1], 1)
    with pytest.raises(ContainmentError):
        genus_bound_check(doubles[1], 2)
