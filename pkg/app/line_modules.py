"""Graded modules over the line ring A = k[z, w].

A `FreeLineModule` is a free A-module with homogeneous basis; its degree-n
coordinates are (basis element i, w-exponent t) for the monomials
z^(n - d_i - t) w^t. For the free module S/(x,y)^j the basis is x^a y^b
(largest first), so its coordinates coincide with the standard monomials
of the floor (x,y)^j.

A `LineModule` is a graded submodule of a free module, optionally taken
modulo a second submodule, stored as echelon bases per degree.
"""

import logging
from typing import Dict, Hashable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.errors import ContainmentError, NotFreeError, WindowTooSmallError
from app.field import Field
from app.graded import GradedIdeal, MonomialFloor, line_power, shift_rows
from app.linalg import (
    Echelon,
    contains,
    coordinates_in,
    empty_rows,
    extend_basis,
    left_kernel,
    quotient_projection,
    row_reduce,
    stack_rows,
)
from app.models import SplittingType
from app.polynomials import monomial

logger = logging.getLogger(__name__)

Z, W = 0, 1


class FreeLineModule:
    """Free graded A-module with basis degrees `degrees`"""

    def __init__(self, degrees: Sequence[int], labels: Optional[Sequence[Hashable]] = None,
                 floor: Optional[MonomialFloor] = None):
        self.degrees: Tuple[int, ...] = tuple(int(d) for d in degrees)
        self.labels: Tuple[Hashable, ...] = tuple(labels) if labels is not None else tuple(range(len(self.degrees)))
        if len(self.labels) != len(self.degrees):
            raise ValueError("one label per basis element is required")
        self.floor = floor
        self._offsets: Dict[int, Tuple[int, ...]] = {}
        self._shifts: Dict[Tuple[int, int], np.ndarray] = {}

    @classmethod
    def neighborhood(cls, j: int) -> "FreeLineModule":
        """S/(x,y)^j as a free A-module on x^a y^b, a + b < j"""
        labels = sorted(((a, s - a) for s in range(j) for a in range(s + 1)), reverse=True)
        return cls([a + b for a, b in labels], labels, floor=line_power(j))

    def __repr__(self) -> str:
        return f"FreeLineModule(degrees={list(self.degrees)})"

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def dual(self) -> "FreeLineModule":
        return FreeLineModule([-d for d in self.degrees], self.labels)

    def component_dims(self, n: int) -> List[int]:
        return [max(0, n - d + 1) for d in self.degrees]

    def dim(self, n: int) -> int:
        return sum(self.component_dims(n))

    def offsets(self, n: int) -> Tuple[int, ...]:
        cached = self._offsets.get(n)
        if cached is None:
            cached = tuple(np.concatenate([[0], np.cumsum(self.component_dims(n))[:-1]]).astype(int)) if self.degrees else ()
            self._offsets[n] = cached
        return cached

    def shift(self, n: int, var: int) -> np.ndarray:
        """Column map for multiplication by z (var 0) or w (var 1) from degree n to n+1"""
        key = (n, var)
        cached = self._shifts.get(key)
        if cached is None:
            target = self.offsets(n + 1)
            parts = []
            for i, size in enumerate(self.component_dims(n)):
                parts.append(target[i] + np.arange(size) + (1 if var == W else 0))
            cached = np.concatenate(parts).astype(np.int64) if parts else np.zeros(0, dtype=np.int64)
            self._shifts[key] = cached
        return cached

    def multiply(self, rows: np.ndarray, n: int, var: int, field: Field) -> np.ndarray:
        return shift_rows(rows, self.shift(n, var), self.dim(n + 1), field)


def pairing_matrix(fixed: np.ndarray, fixed_module: FreeLineModule, fixed_degree: int,
                   other_module: FreeLineModule, other_degree: int, field: Field) -> np.ndarray:
    """Matrix of u -> <fixed, u> from other_module in degree other_degree into A.

    The two modules are dual (same labels, opposite degrees); the pairing
    lands in A of degree fixed_degree + other_degree, indexed by w-exponent.
    """
    rows = other_module.dim(other_degree)
    out_len = fixed_degree + other_degree + 1
    if out_len <= 0:
        return field.zeros((rows, 0))
    mat = field.zeros((rows, out_len))
    f_off, o_off = fixed_module.offsets(fixed_degree), other_module.offsets(other_degree)
    for i in range(fixed_module.rank):
        fl = fixed_degree - fixed_module.degrees[i]
        ol = other_degree - other_module.degrees[i]
        if fl < 0 or ol < 0:
            continue
        coeffs = fixed[f_off[i]:f_off[i] + fl + 1]
        if not np.any(coeffs != 0):
            continue
        t2 = np.arange(ol + 1)[:, None]
        mat[o_off[i] + t2, t2 + np.arange(fl + 1)[None, :]] = coeffs[None, :]
    return mat


class LineModule:
    """Degreewise data of a graded A-module inside a free ambient module.

    `slices[n]` spans the numerator in degree n; `relations[n]`, when given,
    spans a submodule of it that is divided out.
    """

    def __init__(self, ambient: FreeLineModule, slices: Dict[int, Echelon], field: Field,
                 window: Tuple[int, int], label: str = "",
                 relations: Optional[Dict[int, Echelon]] = None):
        self.ambient = ambient
        self.field = field
        self.window = window
        self.label = label
        self._slices = slices
        self.relations = relations
        self._generators: Optional[Dict[int, np.ndarray]] = None

    def __repr__(self) -> str:
        return f"LineModule({self.label or 'module'}, window={self.window})"

    @property
    def top(self) -> int:
        return self.window[1]

    def slice(self, n: int) -> Echelon:
        if n < self.window[0]:
            return Echelon(empty_rows(self.ambient.dim(n), self.field), ())
        if n > self.window[1]:
            raise WindowTooSmallError(f"{self.label}: degree {n} outside window {self.window}")
        return self._slices[n]

    def relation(self, n: int) -> Echelon:
        if self.relations is None or n < self.window[0]:
            return Echelon(empty_rows(self.ambient.dim(n), self.field), ())
        return self.relations[n]

    def dim(self, n: int) -> int:
        return self.slice(n).rank - self.relation(n).rank

    def hilbert_function(self) -> List[int]:
        return [self.dim(n) for n in range(self.window[0], self.window[1] + 1)]

    def hilbert_tail(self) -> Tuple[int, int]:
        """(rank, constant) with dim M_n = rank * n + constant over the certified top degrees"""
        k = settings.STABILIZATION_DEGREES
        top = self.top
        values = [self.dim(n) for n in range(top - k, top + 1)]
        steps = {values[i + 1] - values[i] for i in range(k)}
        if len(steps) != 1:
            raise WindowTooSmallError(f"{self.label}: Hilbert function not linear at the top of the window: {values}")
        slope = steps.pop()
        return slope, values[-1] - slope * top

    def rank(self) -> int:
        return self.hilbert_tail()[0]

    def multiply(self, rows: np.ndarray, n: int, var: int) -> np.ndarray:
        return self.ambient.multiply(rows, n, var, self.field)

    def _lower_part(self, n: int) -> Echelon:
        """Span of the relations and of z, w times the previous degree"""
        width = self.ambient.dim(n)
        blocks = [self.relation(n).rows]
        if n - 1 >= self.window[0]:
            previous = self.slice(n - 1).rows
            blocks += [self.multiply(previous, n - 1, Z), self.multiply(previous, n - 1, W)]
        return row_reduce(stack_rows(blocks, width, self.field), self.field)

    def generator_rows(self) -> Dict[int, np.ndarray]:
        """Numerator vectors lifting a minimal generating set, by degree"""
        if self._generators is None:
            gens = {}
            for n in range(self.window[0], self.window[1] + 1):
                current = self.slice(n)
                if current.rank == 0:
                    continue
                picked = extend_basis(self._lower_part(n), current.rows, self.field)
                if picked:
                    gens[n] = current.rows[picked]
            self._generators = gens
        return self._generators

    def minimal_generator_counts(self) -> Dict[int, int]:
        return {n: rows.shape[0] for n, rows in self.generator_rows().items()}

    def certify_generators(self) -> None:
        """Raise unless the top degrees of the window carry no new generators"""
        k = settings.STABILIZATION_DEGREES
        late = [n for n in self.generator_rows() if n > self.top - k]
        if late:
            raise WindowTooSmallError(f"{self.label}: generators found in degrees {late} at the top of the window")

    def basis_complement(self, n: int) -> np.ndarray:
        """Numerator rows whose classes form a basis of M_n"""
        current = self.slice(n)
        if self.relations is None:
            return current.rows
        return current.rows[extend_basis(self.relation(n), current.rows, self.field)]

    def action_matrix(self, n: int, var: int) -> np.ndarray:
        """Matrix of multiplication by z or w from M_n to M_(n+1) in the bases of `basis_complement`"""
        source = self.basis_complement(n)
        image = self.multiply(source, n, var)
        target = self.basis_complement(n + 1)
        if self.relations is None:
            return coordinates_in(self.slice(n + 1), image)
        projection = quotient_projection(self.relation(n + 1), self.field)
        return _solve_left(self.field.matmul(target, projection), self.field.matmul(image, projection), self.field)

    def verify_commuting(self, n: int) -> bool:
        f = self.field
        zw = f.matmul(self.action_matrix(n, Z), self.action_matrix(n + 1, W))
        wz = f.matmul(self.action_matrix(n, W), self.action_matrix(n + 1, Z))
        return bool(np.array_equal(f.normalize(zw), f.normalize(wz)))

    def is_closed(self) -> bool:
        """Numerator and relations are stable under z and w inside the window"""
        for n in range(self.window[0], self.window[1]):
            for var in (Z, W):
                if not contains(self.slice(n + 1), self.multiply(self.slice(n).rows, n, var), self.field):
                    return False
                if self.relations is not None and not contains(
                        self.relation(n + 1), self.multiply(self.relation(n).rows, n, var), self.field):
                    return False
        return True

    def contains_module(self, other: "LineModule") -> bool:
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        return all(contains(self.slice(n), other.slice(n).rows, self.field) for n in range(lo, hi + 1))

    def same_as(self, other: "LineModule") -> bool:
        return self.contains_module(other) and other.contains_module(self)


def _solve_left(basis: np.ndarray, vectors: np.ndarray, field: Field) -> np.ndarray:
    """X with X @ basis = vectors, for independent basis rows"""
    r = basis.shape[0]
    if vectors.shape[0] == 0 or r == 0:
        return field.zeros((vectors.shape[0], r))
    augmented = np.hstack([basis.T, vectors.T])
    echelon = row_reduce(augmented, field)
    if echelon.pivots[:r] != tuple(range(r)) or any(p >= r for p in echelon.pivots):
        raise ContainmentError("vectors are not in the span of the basis")
    return echelon.rows[:r, r:].T.copy()


def module_of(ideal: GradedIdeal, d: int, top: int, label: str = "") -> LineModule:
    """I / (x,y)^d as a graded A-module over the window [0, top]"""
    field = ideal.field
    floor = line_power(d)
    missing = [m for m in floor.generators if not ideal.contains_form(monomial(field, m))]
    if missing:
        raise ContainmentError(f"{ideal.label or 'ideal'} does not contain (x,y)^{d}: missing {missing}")
    module = image_module(ideal, d, top, label=label)
    for n in (0, max(0, top - 2)):
        if not module.verify_commuting(n):
            raise ContainmentError(f"{module.label}: z and w actions do not commute in degree {n}")
    return module


def quotient_module(numerator: LineModule, relations: LineModule, label: str = "") -> LineModule:
    """numerator / relations, both submodules of the same free module"""
    if not numerator.contains_module(relations):
        raise ContainmentError(f"{relations.label} is not contained in {numerator.label}")
    slices = {n: numerator.slice(n) for n in range(numerator.window[0], numerator.window[1] + 1)}
    rels = {n: relations.slice(n) for n in slices}
    return LineModule(numerator.ambient, slices, numerator.field, numerator.window,
                      label=label or f"{numerator.label}/{relations.label}", relations=rels)


def minimal_generators(module: LineModule) -> Dict[int, int]:
    """Degree -> number of minimal generators, certified by empty top degrees"""
    module.certify_generators()
    return module.minimal_generator_counts()


def splitting_type(module: LineModule) -> SplittingType:
    """Twists of a free module, certified by an exact Hilbert-function match"""
    counts = minimal_generators(module)
    degrees = [n for n, c in sorted(counts.items()) for _ in range(c)]
    lo, hi = module.window
    for n in range(lo, hi + 1):
        expected = sum(max(0, n - e + 1) for e in degrees)
        actual = module.dim(n)
        if actual != expected:
            raise NotFreeError(
                f"{module.label}: dim in degree {n} is {actual}, a free module on generators {degrees} has {expected}"
            )
    return SplittingType(twists=tuple(-e for e in degrees), free_certificate=True, window=(lo, hi))


class Annihilator(NamedTuple):
    """Generators of M^perp inside the dual free module, with the degrees searched"""

    generators: List[Tuple[int, np.ndarray]]
    rank: int
    window: Tuple[int, int]

    @property
    def degrees(self) -> List[int]:
        return [e for e, _ in self.generators]


def _perp_slice(gens: Sequence[Tuple[int, np.ndarray]], ambient: FreeLineModule, dual: FreeLineModule,
                e: int, field: Field) -> Echelon:
    width = dual.dim(e)
    if width == 0:
        return Echelon(empty_rows(0, field), ())
    blocks = [pairing_matrix(row, ambient, n, dual, e, field) for n, row in gens]
    blocks = [b for b in blocks if b.shape[1]]
    if not blocks:
        return row_reduce(field.identity(width), field)
    return row_reduce(left_kernel(np.hstack(blocks), field), field)


def _generator_list(module: LineModule) -> List[Tuple[int, np.ndarray]]:
    if module.relations is not None:
        raise ValueError("annihilator needs a submodule of a free module")
    module.certify_generators()
    return [(n, row) for n, rows in sorted(module.generator_rows().items()) for row in rows]


def annihilator_slice(module: LineModule, e: int) -> Echelon:
    """Degree-e part of M^perp inside the dual free module"""
    return _perp_slice(_generator_list(module), module.ambient, module.ambient.dual(), e, module.field)


def annihilator(module: LineModule) -> Annihilator:
    """A-minimal generators of M^perp = {u in F^dual : <m, u> = 0 for all m in M}.

    M^perp is free of rank r - rank(M); the search stops once the dimension
    grows by exactly that rank, with no new generators, for the certified
    number of consecutive degrees.
    """
    field = module.field
    ambient = module.ambient
    dual = ambient.dual()
    gens = _generator_list(module)
    target_rank = ambient.rank - module.rank()
    k = settings.STABILIZATION_DEGREES
    e_min = -max(ambient.degrees)
    e_cap = module.top + settings.DUAL_DEGREE_SLACK
    generators: List[Tuple[int, np.ndarray]] = []
    previous: Optional[Echelon] = None
    stable = 0
    e = e_min
    while e <= e_cap:
        width = dual.dim(e)
        current = _perp_slice(gens, ambient, dual, e, field)
        if previous is not None and previous.rank:
            lower = row_reduce(np.vstack([dual.multiply(previous.rows, e - 1, Z, field),
                                          dual.multiply(previous.rows, e - 1, W, field)]), field)
        else:
            lower = Echelon(empty_rows(width, field), ())
        new = extend_basis(lower, current.rows, field) if current.rank else []
        for i in new:
            generators.append((e, current.rows[i]))
        increment = current.rank - (previous.rank if previous is not None else 0)
        stable = stable + 1 if increment == target_rank and not new else 0
        previous = current
        if stable >= k:
            logger.debug(f"{module.label}: annihilator generated in degrees {[g for g, _ in generators]}")
            return Annihilator(generators, target_rank, (e_min, e))
        e += 1
    raise WindowTooSmallError(f"{module.label}: torsion dual search did not stabilize up to degree {e_cap}")


def torsion_free_twists(module: LineModule) -> SplittingType:
    """Twists of the sheaf (F/M)~ modulo torsion: the generator degrees of M^perp = Hom(F/M, A)"""
    ann = annihilator(module)
    return SplittingType(twists=tuple(ann.degrees), free_certificate=True, window=ann.window, modulo_torsion=True)


def torsion_saturate(module: LineModule, label: str = "") -> LineModule:
    """N = {v in F : h v in M for some nonzero h in A}, computed as the double annihilator"""
    field = module.field
    ambient = module.ambient
    dual = ambient.dual()
    lo, hi = module.window
    if module.rank() == ambient.rank:
        slices = {n: row_reduce(field.identity(ambient.dim(n)), field) for n in range(lo, hi + 1)}
    else:
        ann = annihilator(module)
        slices = {}
        for n in range(lo, hi + 1):
            width = ambient.dim(n)
            blocks = [pairing_matrix(u, dual, e, ambient, n, field) for e, u in ann.generators]
            blocks = [b for b in blocks if b.shape[1]]
            if width and blocks:
                slices[n] = row_reduce(left_kernel(np.hstack(blocks), field), field)
            else:
                slices[n] = row_reduce(field.identity(width), field)
    saturated = LineModule(ambient, slices, field, module.window, label=label or f"sat({module.label})")
    for n in range(lo, hi + 1):
        if not contains(saturated.slice(n), module.slice(n).rows, field):
            raise ContainmentError(f"{saturated.label} does not contain the input in degree {n}")
    if ambient.floor is not None and not _closed_under_xy(saturated):
        raise ContainmentError(f"{saturated.label} is not stable under x and y")
    return saturated


def _closed_under_xy(module: LineModule) -> bool:
    floor = module.ambient.floor
    for n in range(module.window[0], module.window[1]):
        for var in (0, 1):
            image = shift_rows(module.slice(n).rows, floor.shift(n, var), floor.width(n + 1), module.field)
            if not contains(module.slice(n + 1), image, module.field):
                return False
    return True


def ideal_of_module(module: LineModule, field: Field, label: str = "",
                    saturated_window: Optional[Tuple[int, int]] = None) -> GradedIdeal:
    """Preimage in S of a submodule of S/(x,y)^j"""
    floor = module.ambient.floor
    if floor is None:
        raise ValueError("module is not inside a neighborhood of the line")
    slices = {n: module.slice(n) for n in range(module.window[0], module.window[1] + 1)}
    return GradedIdeal.from_slices(slices, field, floor, label=label, saturated_window=saturated_window)


def free_cover(numerator: LineModule) -> Tuple[FreeLineModule, Dict[int, np.ndarray]]:
    """Free module G on the minimal generators of the numerator, with the matrices of G_n -> F_n"""
    field = numerator.field
    ambient = numerator.ambient
    gen_rows = numerator.generator_rows()
    numerator.certify_generators()
    degrees = [n for n, rows in sorted(gen_rows.items()) for _ in range(rows.shape[0])]
    vectors = [row for _, rows in sorted(gen_rows.items()) for row in rows]
    free = FreeLineModule(degrees)
    lo, hi = numerator.window
    multiples: List[Optional[np.ndarray]] = [None] * len(degrees)
    images: Dict[int, np.ndarray] = {}
    for n in range(lo, hi + 1):
        rows_n = []
        for i, d in enumerate(degrees):
            if d > n:
                continue
            if d == n:
                multiples[i] = vectors[i][None, :]
            else:
                prev = multiples[i]
                multiples[i] = np.vstack([ambient.multiply(prev, n - 1, Z, field),
                                          ambient.multiply(prev[-1:], n - 1, W, field)])
            rows_n.append(multiples[i])
        images[n] = np.vstack(rows_n) if rows_n else field.zeros((0, ambient.dim(n)))
    return free, images


def relation_module(numerator: LineModule, relations: LineModule, label: str = "") -> LineModule:
    """Kernel K of G -> F/R, where G is free on the minimal generators of the numerator.

    G/K is isomorphic to numerator/relations, and K is a submodule of a free module.
    """
    field = numerator.field
    free, images = free_cover(numerator)
    slices: Dict[int, Echelon] = {}
    for n, image in images.items():
        g_dim = free.dim(n)
        if g_dim == 0:
            slices[n] = Echelon(empty_rows(0, field), ())
            continue
        projection = quotient_projection(relations.slice(n), field)
        if projection.shape[1] == 0:
            slices[n] = row_reduce(field.identity(g_dim), field)
        else:
            slices[n] = row_reduce(left_kernel(field.matmul(image, projection), field), field)
    return LineModule(free, slices, field, numerator.window, label=label or f"rel({numerator.label})")


def functional_kernel(numerator: LineModule, functional: np.ndarray, degree: int, label: str = "") -> LineModule:
    """Image in F of {g in G : <g, functional> = 0}.

    G is the free cover of the numerator and `functional` an element of
    degree `degree` of its dual, e.g. one read off `annihilator_slice` of the
    relation module.
    """
    field = numerator.field
    free, images = free_cover(numerator)
    dual = free.dual()
    slices: Dict[int, Echelon] = {}
    for n, image in images.items():
        width = numerator.ambient.dim(n)
        g_dim = free.dim(n)
        if g_dim == 0:
            slices[n] = Echelon(empty_rows(width, field), ())
            continue
        pairing = pairing_matrix(functional, dual, degree, free, n, field)
        kernel = left_kernel(pairing, field) if pairing.shape[1] else field.identity(g_dim)
        if kernel.shape[0] == 0:
            slices[n] = Echelon(empty_rows(width, field), ())
        else:
            slices[n] = row_reduce(field.matmul(kernel, image), field)
    return LineModule(numerator.ambient, slices, field, numerator.window,
                      label=label or f"ker({numerator.label})")


def image_module(ideal: GradedIdeal, j: int, top: int, label: str = "") -> LineModule:
    """(I + (x,y)^j) / (x,y)^j inside the free module S/(x,y)^j"""
    floor = line_power(j)
    ambient = FreeLineModule.neighborhood(j)
    slices = {n: ideal.in_coordinates(floor, n) for n in range(top + 1)}
    return LineModule(ambient, slices, ideal.field, (0, top), label=label or f"{ideal.label}/(x,y)^{j}")
