"""Prime and rational field arithmetic."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from app.field import PrimeField, RationalField, get_field

P = 32003
residues = st.integers(min_value=0, max_value=P - 1)
nonzero = st.integers(min_value=1, max_value=P - 1)

F = PrimeField(P)


def test_rejects_composite_and_large_characteristics():
    with pytest.raises(ValueError):
        PrimeField(32004)
    with pytest.raises(ValueError):
        PrimeField(2 ** 31 + 11)


def test_get_field_zero_means_rationals():
    assert isinstance(get_field(0), RationalField)
    assert get_field(P) == F


def test_reduces_fractions_and_strings():
    assert F(Fraction(1, 2)) == F.inv(2)
    assert F("-1/3") == F.neg(F.inv(3))
    assert F(-1) == P - 1


@given(residues, residues, residues)
def test_ring_axioms(a, b, c):
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a


@given(nonzero)
def test_inverse(a):
    assert F.mul(a, F.inv(a)) == 1
    assert F.div(a, a) == 1


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        RationalField().inv(0)


def test_matmul_stays_reduced():
    a = F.array([[P - 1] * 3] * 2)
    b = F.array([[P - 1] * 2] * 3)
    assert np.array_equal(F.matmul(a, b), F.array([[3, 3], [3, 3]]))


def test_rational_json_is_exact():
    q = RationalField()
    assert q.to_json(q(Fraction(-2, 6))) == "-1/3"
    assert F.to_json(F(5)) == 5
