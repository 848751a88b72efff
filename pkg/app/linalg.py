"""Dense exact linear algebra over a `Field`.

Vectors are rows. Every basis handed around the package is a reduced
row-echelon matrix together with its pivot columns.
"""

import logging
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from app.field import Field

logger = logging.getLogger(__name__)


class Echelon(NamedTuple):
    """A reduced row-echelon basis of a subspace of k^cols"""

    rows: np.ndarray
    pivots: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def width(self) -> int:
        return self.rows.shape[1]


def empty_rows(cols: int, field: Field) -> np.ndarray:
    return field.zeros((0, cols))


def stack_rows(blocks: Sequence[np.ndarray], cols: int, field: Field) -> np.ndarray:
    blocks = [b for b in blocks if b.shape[0]]
    if not blocks:
        return empty_rows(cols, field)
    return np.vstack(blocks)


def row_reduce(matrix: np.ndarray, field: Field) -> Echelon:
    """Reduced row-echelon form of `matrix` (rows beyond the rank dropped)"""
    a = np.array(matrix, dtype=field.dtype, copy=True)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if field.dtype is not object:
        a = field.normalize(a)
    rows, cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        candidates = np.flatnonzero(a[r:, c] != 0)
        if candidates.size == 0:
            continue
        k = r + int(candidates[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r, c:] = field.normalize(a[r, c:] * field.inv(a[r, c]))
        column = a[:, c].copy()
        column[r] = 0
        others = np.flatnonzero(column != 0)
        if others.size:
            a[others, c:] = field.normalize(a[others, c:] - np.outer(column[others], a[r, c:]))
        pivots.append(c)
        r += 1
    return Echelon(a[:r].copy(), tuple(pivots))


def rank_kernel(matrix: np.ndarray, field: Field) -> Tuple[int, np.ndarray]:
    """Rank of `matrix` and a basis of its (right) kernel, one vector per row"""
    matrix = np.asarray(matrix, dtype=field.dtype)
    cols = matrix.shape[1]
    echelon = row_reduce(matrix, field)
    pivot_set = set(echelon.pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    kernel = field.zeros((len(free), cols))
    if free:
        kernel[np.arange(len(free)), free] = 1
        if echelon.pivots:
            kernel[:, list(echelon.pivots)] = field.normalize(-echelon.rows[:, free].T)
    return echelon.rank, kernel


def rank(matrix: np.ndarray, field: Field) -> int:
    return row_reduce(matrix, field).rank


def left_kernel(matrix: np.ndarray, field: Field) -> np.ndarray:
    """Row vectors u with u @ matrix = 0"""
    return rank_kernel(np.asarray(matrix, dtype=field.dtype).T, field)[1]


def reduce_modulo(vectors: np.ndarray, basis: Echelon, field: Field) -> np.ndarray:
    """Normal forms of `vectors` modulo the span of an echelon basis"""
    if basis.rank == 0 or vectors.shape[0] == 0:
        return vectors.copy()
    coefficients = vectors[:, list(basis.pivots)]
    return field.normalize(vectors - field.matmul(coefficients, basis.rows))


def contains(basis: Echelon, vectors: np.ndarray, field: Field) -> bool:
    if vectors.shape[0] == 0:
        return True
    return not np.any(reduce_modulo(vectors, basis, field) != 0)


def independent_rows(vectors: np.ndarray, field: Field) -> List[int]:
    """Indices of a maximal independent subset of rows, earliest rows first"""
    if vectors.shape[0] == 0:
        return []
    return list(row_reduce(np.asarray(vectors).T, field).pivots)


def extend_basis(basis: Echelon, candidates: np.ndarray, field: Field) -> List[int]:
    """Indices of candidate rows that extend `basis` to a basis of the joint span"""
    return independent_rows(reduce_modulo(candidates, basis, field), field)


def span(vectors: np.ndarray, field: Field) -> Echelon:
    return row_reduce(vectors, field)


def sum_of(a: Echelon, b: Echelon, field: Field) -> Echelon:
    return row_reduce(stack_rows([a.rows, b.rows], a.width, field), field)


def intersection(a: Echelon, b: Echelon, field: Field) -> Echelon:
    """The intersection of two subspaces given by echelon bases"""
    cols = a.width
    if a.rank == 0 or b.rank == 0:
        return Echelon(empty_rows(cols, field), ())
    stacked = np.vstack([a.rows, b.rows])
    relations = left_kernel(stacked, field)
    if relations.shape[0] == 0:
        return Echelon(empty_rows(cols, field), ())
    return row_reduce(field.matmul(relations[:, :a.rank], a.rows), field)


def quotient_projection(basis: Echelon, field: Field) -> np.ndarray:
    """Matrix P (width x (width - rank)) with v @ P the coordinates of v modulo the span.

    The quotient coordinates are the non-pivot columns of the normal form.
    """
    cols = basis.width
    pivot_set = set(basis.pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    projection = field.zeros((cols, len(free)))
    if free:
        projection[free, np.arange(len(free))] = 1
        if basis.rank:
            projection[list(basis.pivots), :] = field.normalize(-basis.rows[:, free])
    return projection


def coordinates_in(basis: Echelon, vectors: np.ndarray) -> np.ndarray:
    """Coefficients of vectors (assumed inside the span) on the echelon rows"""
    return vectors[:, list(basis.pivots)].copy()
