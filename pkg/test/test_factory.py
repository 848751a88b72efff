"""Constructions of multiple lines and their structural analysis."""

import numpy as np
import pytest

from app.errors import (
    CoprimalityError,
    DegreeMismatchError,
    SupportCollisionError,
    UnsupportedSpecError,
    VerificationError,
)
from app.factory import (
    ON_BOTH,
    ON_L,
    ON_M,
    beta_identity,
    beta_matrix,
    cdl_curve,
    cm_filtration,
    conormal_restriction,
    default_window,
    disjoint_union,
    double_line,
    extract_type,
    good_triple_data,
    line,
    line_exponent,
    neighborhood,
    on_second_line,
    primitive_extension,
    random_triple_data,
    retraction_space,
    triple_line,
)
from app.invariants import check_condition, min_surface_degree
from app.models import QPType
from app.polynomials import binary_forms_coprime, variables

from conftest import SEED


def test_default_window_grows_with_the_type():
    assert default_window(3, 1, 1) - default_window(3, 0, 0) == 3


def test_line_and_neighborhoods(field, the_line):
    assert (the_line.degree, the_line.genus, the_line.support) == (1, 0, ON_L)
    second = neighborhood(2, field)
    assert (second.degree, second.genus) == (3, 0)
    assert neighborhood(3, field).genus == 3
    with pytest.raises(ValueError):
        neighborhood(0, field)


def test_double_lines(doubles):
    for a, curve in doubles.items():
        assert curve.degree == 2
        assert curve.genus == -a - 1
        assert curve.qp_type == QPType(a=a)
        assert extract_type(curve) == QPType(a=a)
        assert curve.ideal.min_surface_degree(curve.window) == 2


def test_double_line_validates_its_forms(field):
    _, _, z, w = variables(field)
    with pytest.raises(CoprimalityError):
        double_line(0, z, z)
    with pytest.raises(DegreeMismatchError):
        double_line(1, z, w)


def test_triple_lines(triple01, triple02, doubles):
    assert (triple01.degree, triple01.genus) == (3, -3)
    assert (triple02.degree, triple02.genus) == (3, -4)
    assert extract_type(triple01) == QPType(a=0, b=(1,))
    assert extract_type(triple02) == QPType(a=0, b=(2,))
    assert line_exponent(triple01.ideal) == 3
    filtration = cm_filtration(triple01)
    assert len(filtration) == 3
    top = min(triple01.window, doubles[0].window)
    assert filtration[1].same_as(doubles[0].ideal, top)


def test_triple_line_checks_coprimality(field):
    data = good_triple_data(0, 1, field)
    _, _, z, w = variables(field)
    # q = z^3 + w^3 vanishes where z + w does
    with pytest.raises(CoprimalityError):
        triple_line(0, 1, data.f, data.g, z + w, data.r, data.s, data.t)


def test_random_triple_data_is_admissible(field, rng):
    for a, b in ((0, 1), (1, 2), (2, 0)):
        data = random_triple_data(a, b, rng, field)
        assert binary_forms_coprime(data.f, data.g)
        assert binary_forms_coprime(data.p, data.q)
        assert data.f.degree == a + 1 and data.r.degree == a + b


def test_good_quadruple(quadruple022):
    assert (quadruple022.degree, quadruple022.genus) == (4, -7)
    assert quadruple022.qp_type == QPType(a=0, b=(2, 2))
    assert quadruple022.seed in quadruple022.provenance["attempts"]
    assert quadruple022.provenance["attempts"][0] == SEED
    assert quadruple022.ideal.min_surface_degree(quadruple022.window) == 4
    assert len(quadruple022.filtration) == 4


def test_primitive_triple(primitive31):
    assert (primitive31.degree, primitive31.genus) == (3, -5)
    assert primitive31.qp_type == QPType(a=1, b=(0,))
    assert primitive31.qp_type.is_primitive()


def test_second_line_and_unions(field, the_line, doubles):
    moved = on_second_line(doubles[1])
    assert moved.support == ON_M
    assert (moved.degree, moved.genus) == (2, -2)
    with pytest.raises(SupportCollisionError):
        on_second_line(moved)
    union = disjoint_union(the_line, on_second_line(line(field)))
    assert union.support == ON_BOTH
    assert (union.degree, union.genus) == (2, -1)
    with pytest.raises(SupportCollisionError):
        disjoint_union(the_line, the_line)


def test_cdl_curve_recipes(field):
    assert cdl_curve(1, 2, field=field).degree == 1
    assert cdl_curve(2, 1, field=field).genus == -2
    with pytest.raises(UnsupportedSpecError):
        cdl_curve(5, 0, field=field)


@pytest.mark.parametrize("a", [0, 1, 2])
def test_retractions_of_a_double_line(doubles, a):
    _, retractions = retraction_space(doubles[a], a)
    assert retractions.rank == 3 * a + 4


def test_retractions_of_a_primitive_triple(primitive31):
    _, retractions = retraction_space(primitive31, 1)
    assert retractions.rank == 8


def test_primitive_extension_contains_its_base(primitive31):
    quadruple = primitive_extension(primitive31, seed=SEED)
    assert (quadruple.degree, quadruple.genus) == (4, -9)
    assert quadruple.qp_type == QPType(a=1, b=(0, 0))
    assert primitive31.ideal.contains_ideal(quadruple.ideal, quadruple.window)
    assert quadruple.filtration[2].same_as(primitive31.ideal, quadruple.window)
    assert sorted(conormal_restriction(quadruple).twists) == [-3, 4]


def test_surface_condition_is_enforced(primitive31):
    # every quadruple line lies on a quartic
    with pytest.raises(VerificationError) as excinfo:
        primitive_extension(primitive31, seed=SEED, attempts=1, min_surface=5)
    assert excinfo.value.seeds == [SEED]


@pytest.mark.slow
def test_general_primitive_quintuple(primitive51):
    assert (primitive51.degree, primitive51.genus) == (5, -14)
    assert primitive51.qp_type == QPType(a=1, b=(0, 0, 0))
    assert min_surface_degree(primitive51) == 5
    assert sorted(conormal_restriction(primitive51).twists) == [-3, 5]
    assert check_condition(primitive51, 5, 0)


def test_conormal_restrictions(field, the_line, doubles, triple01, primitive31):
    assert list(conormal_restriction(the_line).twists) == [-1, -1]
    for a in range(3):
        assert list(conormal_restriction(doubles[a]).twists) == [2 * a, -a - 2]
    assert list(conormal_restriction(triple01).twists) == [1, -3]
    assert list(conormal_restriction(primitive31).twists) == [3, -3]


def test_conormal_restriction_needs_a_closed_form(quadruple022):
    with pytest.raises(UnsupportedSpecError):
        conormal_restriction(quadruple022)


@pytest.mark.parametrize("a", [0, 1, 2])
def test_beta_matrix(field, a):
    rng = np.random.default_rng(SEED + a)
    data = random_triple_data(a, 2, rng, field)
    beta = beta_matrix(data)
    assert all(v.is_zero() for v in beta.apply_syzygy())
    assert beta.generic_rank(rng) == 5
    assert beta_identity(data).is_zero()
    start = 2 * a + data.b + 3
    assert [beta.kernel_dimension(n) for n in range(start, start + 4)] == [0, 1, 2, 3]
