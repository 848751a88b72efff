"""Homogeneous ideals of k[x,y,z,w] stored degree by degree.

An ideal carries a *floor*: a monomial ideal known to lie inside it (for
curves on the line x=y=0 this is (x,y)^d). Slices are kept as echelon bases
in the coordinates of the standard monomials of degree n, the monomials not
in the floor, which keeps every slice small.
"""

import logging
import threading
from math import comb
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.errors import WindowTooSmallError
from app.field import Field
from app.linalg import (
    Echelon,
    contains,
    empty_rows,
    extend_basis,
    intersection,
    left_kernel,
    quotient_projection,
    row_reduce,
    stack_rows,
)
from app.polynomials import (
    HomogeneousPolynomial,
    Monomial,
    UNIT_MONOMIALS,
    from_vector,
    monomial,
    monomial_degree,
    monomial_divides,
    monomial_key,
    monomial_lcm,
    monomial_mul,
    monomials_of_degree,
    permute_monomial,
    to_vector,
)

logger = logging.getLogger(__name__)


def ambient_dimension(n: int) -> int:
    """dim S_n for S = k[x,y,z,w]"""
    return comb(n + 3, 3) if n >= 0 else 0


class MonomialFloor:
    """A monomial ideal used as the quotient coordinate system for slices"""

    def __init__(self, generators: Iterable[Monomial] = ()):
        kept: List[Monomial] = []
        for m in sorted({tuple(g) for g in generators}, key=monomial_key):
            if not any(monomial_divides(k, m) for k in kept):
                kept.append(m)
        self.generators: Tuple[Monomial, ...] = tuple(sorted(kept, key=monomial_key, reverse=True))
        self._standard: Dict[int, Tuple[Monomial, ...]] = {}
        self._index: Dict[int, Dict[Monomial, int]] = {}
        self._shifts: Dict[Tuple[int, int], np.ndarray] = {}
        self._lock = threading.Lock()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MonomialFloor) and other.generators == self.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    def __repr__(self) -> str:
        return f"MonomialFloor({list(self.generators)})"

    def contains(self, m: Monomial) -> bool:
        return any(monomial_divides(g, m) for g in self.generators)

    def standard_monomials(self, n: int) -> Tuple[Monomial, ...]:
        cached = self._standard.get(n)
        if cached is None:
            cached = tuple(m for m in monomials_of_degree(n) if not self.contains(m))
            with self._lock:
                self._standard.setdefault(n, cached)
        return cached

    def floor_monomials(self, n: int) -> Tuple[Monomial, ...]:
        return tuple(m for m in monomials_of_degree(n) if self.contains(m))

    def index(self, n: int) -> Dict[Monomial, int]:
        cached = self._index.get(n)
        if cached is None:
            cached = {m: i for i, m in enumerate(self.standard_monomials(n))}
            with self._lock:
                self._index.setdefault(n, cached)
        return cached

    def width(self, n: int) -> int:
        return len(self.standard_monomials(n))

    def dimension(self, n: int) -> int:
        """dim of the floor in degree n"""
        return ambient_dimension(n) - self.width(n)

    def shift(self, n: int, var: int) -> np.ndarray:
        """Column map for multiplication by a variable from degree n to n+1 (-1: lands in the floor)"""
        key = (n, var)
        cached = self._shifts.get(key)
        if cached is None:
            target = self.index(n + 1)
            unit = UNIT_MONOMIALS[var]
            cached = np.array(
                [target.get(monomial_mul(m, unit), -1) for m in self.standard_monomials(n)], dtype=np.int64
            )
            with self._lock:
                self._shifts.setdefault(key, cached)
        return cached

    def product(self, other: "MonomialFloor") -> "MonomialFloor":
        return MonomialFloor(monomial_mul(m, n) for m in self.generators for n in other.generators)

    def intersection(self, other: "MonomialFloor") -> "MonomialFloor":
        return MonomialFloor(monomial_lcm(m, n) for m in self.generators for n in other.generators)

    def permute(self, perm: Sequence[int]) -> "MonomialFloor":
        return MonomialFloor(permute_monomial(m, perm) for m in self.generators)

    def line_power_exponent(self) -> Optional[int]:
        """d when this floor is (x, y)^d"""
        if not self.generators:
            return None
        d = monomial_degree(self.generators[0])
        return d if self == line_power(d) else None


_FLOORS: Dict[Tuple[str, int], MonomialFloor] = {}
_FLOORS_LOCK = threading.Lock()


def _cached_floor(kind: str, d: int, build) -> MonomialFloor:
    with _FLOORS_LOCK:
        floor = _FLOORS.get((kind, d))
        if floor is None:
            floor = _FLOORS[(kind, d)] = build()
        return floor


def line_power(d: int) -> MonomialFloor:
    """(x, y)^d, the ideal of the d-th neighborhood of x=y=0"""
    return _cached_floor("L", d, lambda: MonomialFloor((i, d - i, 0, 0) for i in range(d + 1)))


def second_line_power(d: int) -> MonomialFloor:
    """(z, w)^d, the ideal of the d-th neighborhood of z=w=0"""
    return _cached_floor("M", d, lambda: MonomialFloor((0, 0, i, d - i) for i in range(d + 1)))


EMPTY_FLOOR = MonomialFloor()


def shift_rows(rows: np.ndarray, shift: np.ndarray, width: int, field: Field) -> np.ndarray:
    out = field.zeros((rows.shape[0], width))
    valid = shift >= 0
    if rows.shape[0] and np.any(valid):
        out[:, shift[valid]] = rows[:, valid]
    return out


class HilbertPolynomial(NamedTuple):
    """h(n) = degree * n + constant, certified over a window tail"""

    degree: int
    constant: int

    @property
    def genus(self) -> int:
        return 1 - self.constant


class GradedIdeal:
    """A homogeneous ideal: generators plus a floor, with cached echelon slices"""

    def __init__(self, generators: Iterable[HomogeneousPolynomial], field: Field,
                 floor: Optional[MonomialFloor] = None, label: str = "",
                 slices: Optional[Dict[int, Echelon]] = None,
                 saturated_window: Optional[Tuple[int, int]] = None):
        gens = [g for g in generators if not g.is_zero()]
        for g in gens:
            if g.field != field:
                raise ValueError("generator over a different field")
        self.generators: Tuple[HomogeneousPolynomial, ...] = tuple(gens)
        self.field = field
        self.floor = floor if floor is not None else EMPTY_FLOOR
        self.label = label
        self.saturated_window = saturated_window
        self._by_degree: Dict[int, List[HomogeneousPolynomial]] = {}
        for g in gens:
            self._by_degree.setdefault(g.degree, []).append(g)
        self._slices: Dict[int, Echelon] = dict(slices or {})
        self._coordinates: Dict[Tuple[MonomialFloor, int], Echelon] = {}
        self._lock = threading.RLock()

    def __repr__(self) -> str:
        name = self.label or "ideal"
        return f"GradedIdeal({name}, {len(self.generators)} generators, floor={list(self.floor.generators)})"

    @property
    def is_saturated(self) -> bool:
        return self.saturated_window is not None

    # -- slices -----------------------------------------------------------

    def slice(self, n: int) -> Echelon:
        """Echelon basis of I_n modulo the floor, in standard-monomial coordinates"""
        if n < 0:
            return Echelon(empty_rows(0, self.field), ())
        cached = self._slices.get(n)
        if cached is not None:
            return cached
        with self._lock:
            start = n
            while start > 0 and (start - 1) not in self._slices:
                start -= 1
            for k in range(start, n + 1):
                if k not in self._slices:
                    self._slices[k] = self._compute_slice(k)
            return self._slices[n]

    def _compute_slice(self, n: int) -> Echelon:
        width = self.floor.width(n)
        blocks = []
        if n > 0:
            previous = self._slices[n - 1]
            if previous.rank:
                for var in range(4):
                    blocks.append(shift_rows(previous.rows, self.floor.shift(n - 1, var), width, self.field))
        index = self.floor.index(n)
        gens = self._by_degree.get(n, [])
        if gens:
            blocks.append(np.vstack([to_vector(g, index, width) for g in gens]))
        echelon = row_reduce(stack_rows(blocks, width, self.field), self.field)
        logger.debug(f"{self.label or 'ideal'}: slice {n} has rank {echelon.rank} of {width}")
        return echelon

    def dim(self, n: int) -> int:
        """dim I_n"""
        if n < 0:
            return 0
        return self.floor.dimension(n) + self.slice(n).rank

    def codim(self, n: int) -> int:
        """dim (S/I)_n"""
        return ambient_dimension(n) - self.dim(n)

    def hilbert_function(self, window: Tuple[int, int]) -> List[int]:
        lo, hi = window
        return [self.codim(n) for n in range(lo, hi + 1)]

    def hilbert_polynomial(self, top: int) -> HilbertPolynomial:
        """Linear Hilbert polynomial read off a certified tail ending at `top`"""
        k = settings.STABILIZATION_DEGREES
        values = [self.codim(n) for n in range(top - k, top + 1)]
        steps = {values[i + 1] - values[i] for i in range(k)}
        if len(steps) != 1:
            raise WindowTooSmallError(
                f"{self.label or 'ideal'}: Hilbert function not linear over [{top - k}, {top}]: {values}"
            )
        degree = steps.pop()
        return HilbertPolynomial(degree, values[-1] - degree * top)

    def min_surface_degree(self, top: int) -> int:
        for n in range(top + 1):
            if self.dim(n) > 0:
                return n
        raise WindowTooSmallError(f"{self.label or 'ideal'}: no nonzero slice up to degree {top}")

    # -- membership and elements -----------------------------------------

    def contains_form(self, u: HomogeneousPolynomial) -> bool:
        if u.is_zero():
            return True
        n = u.degree
        vec = to_vector(u, self.floor.index(n), self.floor.width(n))
        return contains(self.slice(n), vec[None, :], self.field)

    def contains_ideal(self, other: "GradedIdeal", top: int) -> bool:
        return all(
            contains(self.slice(n), other.in_coordinates(self.floor, n).rows, self.field)
            for n in range(top + 1)
        )

    def same_as(self, other: "GradedIdeal", top: int) -> bool:
        return self.contains_ideal(other, top) and other.contains_ideal(self, top)

    def lift(self, vector: np.ndarray, n: int) -> HomogeneousPolynomial:
        """A form whose class modulo the floor is `vector`"""
        return from_vector(self.field, vector, self.floor.standard_monomials(n), n)

    def random_element(self, n: int, rng: np.random.Generator) -> HomogeneousPolynomial:
        """A random element of I_n, floor monomials included"""
        basis = self.slice(n)
        form = self.lift(
            self.field.matmul(self.field.random_elements(rng, basis.rank)[None, :], basis.rows)[0]
            if basis.rank else self.field.zeros(self.floor.width(n)),
            n,
        )
        floor_part = self.floor.floor_monomials(n)
        coeffs = self.field.random_elements(rng, len(floor_part))
        extra = HomogeneousPolynomial(self.field, dict(zip(floor_part, coeffs)), n)
        return form + extra

    def all_generators(self) -> List[HomogeneousPolynomial]:
        """Floor generators followed by the stored generators"""
        return [monomial(self.field, m) for m in self.floor.generators] + list(self.generators)

    def max_generator_degree(self) -> int:
        return max((g.degree for g in self.all_generators()), default=0)

    # -- change of floor --------------------------------------------------

    def in_coordinates(self, other: MonomialFloor, n: int) -> Echelon:
        """Echelon basis of (I + other)_n / other_n in the standard coordinates of `other`"""
        if other == self.floor:
            return self.slice(n)
        key = (other, n)
        cached = self._coordinates.get(key)
        if cached is not None:
            return cached
        target = other.index(n)
        width = other.width(n)
        mapping = np.array([target.get(m, -1) for m in self.floor.standard_monomials(n)], dtype=np.int64)
        rows = shift_rows(self.slice(n).rows, mapping, width, self.field)
        units = [target[m] for m in other.standard_monomials(n) if self.floor.contains(m)]
        unit_rows = self.field.zeros((len(units), width))
        if units:
            unit_rows[np.arange(len(units)), units] = 1
        echelon = row_reduce(stack_rows([rows, unit_rows], width, self.field), self.field)
        with self._lock:
            self._coordinates.setdefault(key, echelon)
        return echelon

    # -- derived ideals ---------------------------------------------------

    @classmethod
    def from_slices(cls, slices: Dict[int, Echelon], field: Field, floor: MonomialFloor,
                    label: str = "", saturated_window: Optional[Tuple[int, int]] = None) -> "GradedIdeal":
        """The ideal generated by degreewise data known on [0, top]; slices are kept as the cache"""
        top = max(slices)
        generators: List[HomogeneousPolynomial] = []
        for n in range(top + 1):
            current = slices[n]
            if current.rank == 0:
                continue
            width = floor.width(n)
            blocks = []
            if n > 0 and slices[n - 1].rank:
                for var in range(4):
                    blocks.append(shift_rows(slices[n - 1].rows, floor.shift(n - 1, var), width, field))
            multiples = row_reduce(stack_rows(blocks, width, field), field)
            for i in extend_basis(multiples, current.rows, field):
                generators.append(from_vector(field, current.rows[i], floor.standard_monomials(n), n))
        return cls(generators, field, floor=floor, label=label, slices=dict(slices),
                   saturated_window=saturated_window)

    def colon_slice(self, n: int, upper: Echelon) -> Echelon:
        """{v in S_n : x v, y v, z v, w v all lie in `upper`} modulo the floor"""
        field = self.field
        width = self.floor.width(n)
        projection = quotient_projection(upper, field)
        q = projection.shape[1]
        if q == 0:
            return row_reduce(field.identity(width), field)
        blocks = []
        for var in range(4):
            shift = self.floor.shift(n, var)
            block = field.zeros((width, q))
            valid = shift >= 0
            block[valid] = projection[shift[valid]]
            blocks.append(block)
        kernel = left_kernel(np.hstack(blocks), field)
        return row_reduce(kernel, field)

    def saturate(self, top: int) -> "GradedIdeal":
        """Saturation by downward propagation from degree `top`"""
        k = settings.STABILIZATION_DEGREES
        for n in range(max(0, top - k + 1), top):
            if self.colon_slice(n, self.slice(n + 1)).rank != self.slice(n).rank:
                raise WindowTooSmallError(
                    f"{self.label or 'ideal'}: saturation criterion fails at degree {n} below window top {top}"
                )
        saturated = {top: self.slice(top)}
        for n in range(top - 1, -1, -1):
            saturated[n] = self.colon_slice(n, saturated[n + 1])
        logger.debug(f"{self.label or 'ideal'}: saturated over [0, {top}]")
        return GradedIdeal.from_slices(saturated, self.field, self.floor, label=self.label,
                                       saturated_window=(0, top))

    def intersect(self, other: "GradedIdeal", top: int) -> "GradedIdeal":
        """Degreewise intersection over [0, top]"""
        floor = self.floor.intersection(other.floor)
        slices = {
            n: intersection(self.in_coordinates(floor, n), other.in_coordinates(floor, n), self.field)
            for n in range(top + 1)
        }
        window = (0, top) if self.is_saturated and other.is_saturated else None
        label = f"{self.label} & {other.label}"
        return GradedIdeal.from_slices(slices, self.field, floor, label=label, saturated_window=window)

    def extend(self, extra: Iterable[HomogeneousPolynomial], floor: Optional[MonomialFloor] = None,
               label: str = "") -> "GradedIdeal":
        """I + (extra), optionally over a smaller floor contained in I"""
        generators = list(self.generators) + list(extra)
        if floor is not None and floor != self.floor:
            generators = [monomial(self.field, m) for m in self.floor.generators] + generators
        return GradedIdeal(generators, self.field, floor=floor or self.floor, label=label or self.label)

    def permute(self, perm: Sequence[int], label: str = "") -> "GradedIdeal":
        return GradedIdeal([g.permute(perm) for g in self.generators], self.field,
                           floor=self.floor.permute(perm), label=label or self.label,
                           saturated_window=self.saturated_window)

    def canonical_generators(self, max_degree: Optional[int] = None) -> List[HomogeneousPolynomial]:
        """Minimal generators in reduced echelon form over the full monomial basis.

        Independent of the floor and of the order generators were given in.
        """
        top = self.max_generator_degree() if max_degree is None else max_degree
        field = self.field
        out: List[HomogeneousPolynomial] = []
        previous: Optional[Echelon] = None
        for n in range(top + 1):
            full = self.in_coordinates(EMPTY_FLOOR, n)
            width = EMPTY_FLOOR.width(n)
            if previous is not None and previous.rank:
                blocks = [shift_rows(previous.rows, EMPTY_FLOOR.shift(n - 1, var), width, field) for var in range(4)]
                multiples = set(row_reduce(np.vstack(blocks), field).pivots)
            else:
                multiples = set()
            for row, pivot in zip(full.rows, full.pivots):
                if pivot not in multiples:
                    out.append(from_vector(field, row, monomials_of_degree(n), n))
            previous = full
        return out
