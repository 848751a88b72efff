"""Row reduction, kernels and subspace operations."""

import numpy as np
from hypothesis import given, settings as hsettings, strategies as st

from app.field import PrimeField, RationalField
from app.linalg import (
    contains,
    extend_basis,
    intersection,
    left_kernel,
    quotient_projection,
    rank,
    rank_kernel,
    row_reduce,
    span,
)

F = PrimeField(101)

matrices = st.integers(min_value=1, max_value=6).flatmap(
    lambda rows: st.integers(min_value=1, max_value=6).flatmap(
        lambda cols: st.lists(
            st.lists(st.integers(min_value=0, max_value=100), min_size=cols, max_size=cols),
            min_size=rows, max_size=rows,
        )
    )
)


@given(matrices)
@hsettings(max_examples=60)
def test_rank_nullity(data):
    m = F.array(data)
    r, kernel = rank_kernel(m, F)
    assert r + kernel.shape[0] == m.shape[1]
    if kernel.shape[0]:
        assert not np.any(F.matmul(m, kernel.T))


@given(matrices)
@hsettings(max_examples=60)
def test_rank_of_transpose(data):
    m = F.array(data)
    assert rank(m, F) == rank(m.T, F)


@given(matrices)
@hsettings(max_examples=40)
def test_left_kernel_annihilates(data):
    m = F.array(data)
    kernel = left_kernel(m, F)
    assert kernel.shape[0] == m.shape[0] - rank(m, F)
    if kernel.shape[0]:
        assert not np.any(F.matmul(kernel, m))


def test_echelon_is_reduced():
    echelon = row_reduce(F.array([[2, 4, 6], [1, 2, 4], [3, 6, 10]]), F)
    assert echelon.pivots == (0, 2)
    assert np.array_equal(echelon.rows, F.array([[1, 2, 0], [0, 0, 1]]))


def test_rational_reduction_matches():
    q = RationalField()
    m = q.array([[1, 2], [3, 4]])
    assert row_reduce(m, q).rank == 2
    assert rank(q.array([[1, 2], [2, 4]]), q) == 1


def test_intersection_and_membership():
    a = span(F.array([[1, 0, 0], [0, 1, 0]]), F)
    b = span(F.array([[0, 1, 0], [0, 0, 1]]), F)
    meet = intersection(a, b, F)
    assert meet.rank == 1
    assert contains(meet, F.array([[0, 5, 0]]), F)
    assert not contains(meet, F.array([[1, 0, 0]]), F)


def test_extend_basis_skips_dependent_candidates():
    basis = span(F.array([[1, 0, 0]]), F)
    picked = extend_basis(basis, F.array([[2, 0, 0], [0, 1, 0], [1, 1, 0], [0, 0, 1]]), F)
    assert picked == [1, 3]


def test_quotient_projection_kills_the_subspace():
    basis = span(F.array([[1, 1, 0]]), F)
    projection = quotient_projection(basis, F)
    assert projection.shape == (3, 2)
    assert not np.any(F.matmul(basis.rows, projection))
    assert rank(projection, F) == 2
