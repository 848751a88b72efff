"""Homogeneous forms and binary-form coprimality."""

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from app.errors import DegreeMismatchError
from app.field import PrimeField
from app.polynomials import (
    LINE_SWAP,
    HomogeneousPolynomial,
    binary_form,
    binary_forms_coprime,
    from_terms,
    monomial,
    monomials_of_degree,
    random_binary_form,
    variables,
    zero,
)

F = PrimeField(32003)
x, y, z, w = variables(F)


def forms(degree):
    coefficients = st.lists(st.integers(min_value=0, max_value=32002),
                            min_size=len(monomials_of_degree(degree)), max_size=len(monomials_of_degree(degree)))
    return coefficients.map(lambda cs: HomogeneousPolynomial(F, dict(zip(monomials_of_degree(degree), cs)), degree))


@given(forms(2), forms(1), forms(1))
@hsettings(max_examples=40)
def test_product_is_bilinear(u, v, t):
    assert u * (v + t) == u * v + u * t
    assert u * v == v * u


@given(forms(2), forms(3))
@hsettings(max_examples=40)
def test_degree_is_additive(u, v):
    product = u * v
    assert product.is_zero() or product.degree == 5


@given(forms(3))
@hsettings(max_examples=40)
def test_line_swap_is_an_involution(u):
    assert u.permute(LINE_SWAP).permute(LINE_SWAP) == u


def test_rejects_mixed_degrees():
    with pytest.raises(DegreeMismatchError):
        x + x * y
    with pytest.raises(DegreeMismatchError):
        from_terms(F, [((1, 0, 0, 0), 1), ((2, 0, 0, 0), 1)])


def test_from_terms_combines_and_drops_zeros():
    u = from_terms(F, [((1, 1, 0, 0), 2), ((1, 1, 0, 0), -2), ((0, 0, 1, 1), 5)])
    assert u == monomial(F, (0, 0, 1, 1), 5)


def test_formatting_uses_signed_residues():
    assert str(x * x - 3 * (y * z)) == "x^2 - 3*y*z"
    assert str(zero(F, 2)) == "0"


def test_binary_form_coefficients_and_evaluation():
    f = binary_form(F, [1, 0, -1])
    assert f == z * z - w * w
    assert f.binary_coefficients() == [1, 0, F(-1)]
    assert f.evaluate_binary(1, 1) == 0
    assert f.evaluate_binary(2, 1) == 3


def test_coprimality():
    assert binary_forms_coprime(z, w)
    assert binary_forms_coprime(z ** 3, w ** 2)
    assert not binary_forms_coprime(z * w, z * z - z * w)
    assert not binary_forms_coprime(z, zero(F, 1))
    with pytest.raises(ValueError):
        binary_forms_coprime(x, z)


def test_random_binary_forms_are_nonzero():
    rng = np.random.default_rng(7)
    for degree in range(4):
        f = random_binary_form(F, degree, rng)
        assert not f.is_zero() and f.is_binary() and f.degree == degree
