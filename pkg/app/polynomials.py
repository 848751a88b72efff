"""Homogeneous polynomials in x, y, z, w with exact coefficients.

Monomials are exponent 4-tuples ordered graded-lexicographically with
x > y > z > w. Forms in z, w alone ("binary forms") live in the same class.
"""

import logging
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from app.errors import DegreeMismatchError
from app.field import Field, Scalar
from app.linalg import rank

logger = logging.getLogger(__name__)

Monomial = Tuple[int, int, int, int]
VARIABLES = ("x", "y", "z", "w")
ONE: Monomial = (0, 0, 0, 0)
UNIT_MONOMIALS: Tuple[Monomial, ...] = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))

# x <-> z, y <-> w: moves the line x=y=0 onto z=w=0
LINE_SWAP = (2, 3, 0, 1)


def monomial_degree(m: Monomial) -> int:
    return m[0] + m[1] + m[2] + m[3]


def monomial_mul(m: Monomial, n: Monomial) -> Monomial:
    return (m[0] + n[0], m[1] + n[1], m[2] + n[2], m[3] + n[3])


def monomial_divides(m: Monomial, n: Monomial) -> bool:
    return m[0] <= n[0] and m[1] <= n[1] and m[2] <= n[2] and m[3] <= n[3]


def monomial_lcm(m: Monomial, n: Monomial) -> Monomial:
    return (max(m[0], n[0]), max(m[1], n[1]), max(m[2], n[2]), max(m[3], n[3]))


def monomial_key(m: Monomial) -> Tuple[int, Monomial]:
    """Sort key for the graded-lex order (larger key = larger monomial)"""
    return (monomial_degree(m), m)


def permute_monomial(m: Monomial, perm: Sequence[int]) -> Monomial:
    return (m[perm[0]], m[perm[1]], m[perm[2]], m[perm[3]])


@lru_cache(maxsize=None)
def monomials_of_degree(n: int) -> Tuple[Monomial, ...]:
    """All degree-n monomials, largest first"""
    if n < 0:
        return ()
    out = []
    for i in range(n, -1, -1):
        for j in range(n - i, -1, -1):
            for k in range(n - i - j, -1, -1):
                out.append((i, j, k, n - i - j - k))
    return tuple(out)


def format_monomial(m: Monomial) -> str:
    parts = []
    for name, e in zip(VARIABLES, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


class HomogeneousPolynomial:
    """A homogeneous form: monomial -> nonzero coefficient, plus its degree"""

    __slots__ = ("field", "terms", "degree")

    def __init__(self, field: Field, terms: Mapping[Monomial, Scalar], degree: Optional[int] = None):
        cleaned: Dict[Monomial, Scalar] = {}
        for m, c in terms.items():
            m = tuple(int(e) for e in m)
            if len(m) != 4 or min(m) < 0:
                raise ValueError(f"invalid exponent tuple {m}")
            c = field(c)
            if c != 0:
                cleaned[m] = c
        degrees = {monomial_degree(m) for m in cleaned}
        if len(degrees) > 1:
            raise DegreeMismatchError(f"terms of degrees {sorted(degrees)} in one form")
        if degrees:
            found = degrees.pop()
            if degree is not None and degree != found:
                raise DegreeMismatchError(f"declared degree {degree} but terms have degree {found}")
            degree = found
        self.field = field
        self.terms = MappingProxyType(dict(sorted(cleaned.items(), reverse=True)))
        self.degree = degree

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_binary(self) -> bool:
        """True for forms in z, w only"""
        return all(m[0] == 0 and m[1] == 0 for m in self.terms)

    def coefficient(self, m: Monomial) -> Scalar:
        return self.terms.get(tuple(m), self.field.zero)

    def monomials(self) -> List[Monomial]:
        return list(self.terms)

    def leading_monomial(self) -> Optional[Monomial]:
        return next(iter(self.terms), None)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: "HomogeneousPolynomial") -> "HomogeneousPolynomial":
        return poly_add(self, other)

    def __sub__(self, other: "HomogeneousPolynomial") -> "HomogeneousPolynomial":
        return poly_add(self, -other)

    def __neg__(self) -> "HomogeneousPolynomial":
        return self.scale(-1)

    def __mul__(self, other: Union["HomogeneousPolynomial", int]) -> "HomogeneousPolynomial":
        if isinstance(other, HomogeneousPolynomial):
            return poly_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other: int) -> "HomogeneousPolynomial":
        return self.scale(other)

    def __pow__(self, exponent: int) -> "HomogeneousPolynomial":
        result = constant(self.field, 1)
        for _ in range(exponent):
            result = poly_mul(result, self)
        return result

    def scale(self, c: Scalar) -> "HomogeneousPolynomial":
        c = self.field(c)
        return HomogeneousPolynomial(
            self.field, {m: self.field.mul(v, c) for m, v in self.terms.items()}, self.degree
        )

    def times_monomial(self, m: Monomial) -> "HomogeneousPolynomial":
        degree = None if self.degree is None else self.degree + monomial_degree(m)
        return HomogeneousPolynomial(self.field, {monomial_mul(k, m): v for k, v in self.terms.items()}, degree)

    def permute(self, perm: Sequence[int] = LINE_SWAP) -> "HomogeneousPolynomial":
        return HomogeneousPolynomial(
            self.field, {permute_monomial(m, perm): v for m, v in self.terms.items()}, self.degree
        )

    # -- binary forms -----------------------------------------------------

    def binary_coefficients(self) -> List[Scalar]:
        """Coefficients of z^(d-t) w^t for t = 0..d"""
        if not self.is_binary():
            raise ValueError("not a form in z, w")
        d = self.degree or 0
        return [self.coefficient((0, 0, d - t, t)) for t in range(d + 1)]

    def evaluate_binary(self, z: Scalar, w: Scalar) -> Scalar:
        f = self.field
        total = f.zero
        for (_, _, k, l), c in self.terms.items():
            total = f.add(total, f.mul(c, f.mul(_power(f, z, k), _power(f, w, l))))
        return total

    # -- dunder -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomogeneousPolynomial):
            return NotImplemented
        return self.field == other.field and dict(self.terms) == dict(other.terms)

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __repr__(self) -> str:
        return f"HomogeneousPolynomial({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.terms.items():
            c = _signed(self.field, c)
            sign = "-" if c < 0 else "+"
            magnitude = -c if c < 0 else c
            body = format_monomial(m)
            if magnitude != 1:
                body = f"{magnitude}" if body == "1" else f"{magnitude}*{body}"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text


def _signed(field: Field, c: Scalar):
    if field.is_prime_field and c > field.characteristic // 2:
        return c - field.characteristic
    return c


def _power(field: Field, base: Scalar, exponent: int) -> Scalar:
    result = field.one
    for _ in range(exponent):
        result = field.mul(result, base)
    return result


def poly_add(u: HomogeneousPolynomial, v: HomogeneousPolynomial) -> HomogeneousPolynomial:
    """Sum of two forms of the same degree (either may be zero)"""
    if u.field != v.field:
        raise ValueError("forms over different fields")
    if not u.is_zero() and not v.is_zero() and u.degree != v.degree:
        raise DegreeMismatchError(f"cannot add forms of degrees {u.degree} and {v.degree}")
    field = u.field
    terms = dict(u.terms)
    for m, c in v.terms.items():
        terms[m] = field.add(terms.get(m, field.zero), c)
    degree = u.degree if not u.is_zero() else v.degree
    if u.is_zero() and v.is_zero():
        degree = u.degree if u.degree is not None else v.degree
    return HomogeneousPolynomial(field, terms, degree)


def poly_mul(u: HomogeneousPolynomial, v: HomogeneousPolynomial) -> HomogeneousPolynomial:
    """Product of two forms; the degree is additive"""
    if u.field != v.field:
        raise ValueError("forms over different fields")
    field = u.field
    degree = None if u.degree is None or v.degree is None else u.degree + v.degree
    terms: Dict[Monomial, Scalar] = {}
    for m, a in u.terms.items():
        for n, b in v.terms.items():
            k = monomial_mul(m, n)
            terms[k] = field.add(terms.get(k, field.zero), field.mul(a, b))
    return HomogeneousPolynomial(field, terms, degree)


# -- constructors ------------------------------------------------------------

def zero(field: Field, degree: Optional[int] = None) -> HomogeneousPolynomial:
    return HomogeneousPolynomial(field, {}, degree)


def constant(field: Field, c: Scalar) -> HomogeneousPolynomial:
    return HomogeneousPolynomial(field, {ONE: c}, 0)


def monomial(field: Field, exponents: Sequence[int], coefficient: Scalar = 1) -> HomogeneousPolynomial:
    exponents = tuple(exponents)
    return HomogeneousPolynomial(field, {exponents: coefficient}, monomial_degree(exponents))


def variables(field: Field) -> Tuple[HomogeneousPolynomial, ...]:
    """The four coordinate forms x, y, z, w"""
    return tuple(monomial(field, m) for m in UNIT_MONOMIALS)


def from_terms(field: Field, pairs: Iterable[Tuple[Sequence[int], Scalar]],
               degree: Optional[int] = None) -> HomogeneousPolynomial:
    terms: Dict[Monomial, Scalar] = {}
    for exponents, c in pairs:
        m = tuple(int(e) for e in exponents)
        terms[m] = field.add(terms.get(m, field.zero), field(c))
    return HomogeneousPolynomial(field, terms, degree)


def binary_form(field: Field, coefficients: Sequence[Scalar]) -> HomogeneousPolynomial:
    """sum_t coefficients[t] * z^(d-t) w^t with d = len(coefficients) - 1"""
    d = len(coefficients) - 1
    return HomogeneousPolynomial(field, {(0, 0, d - t, t): c for t, c in enumerate(coefficients)}, d)


def random_binary_form(field: Field, degree: int, rng: np.random.Generator) -> HomogeneousPolynomial:
    while True:
        form = binary_form(field, list(field.random_elements(rng, degree + 1)))
        if not form.is_zero():
            return form


def from_vector(field: Field, vector: np.ndarray, basis: Sequence[Monomial], degree: int) -> HomogeneousPolynomial:
    """The form with coefficient vector[i] on basis[i]"""
    return HomogeneousPolynomial(
        field, {basis[int(i)]: vector[int(i)] for i in np.flatnonzero(vector != 0)}, degree
    )


def to_vector(u: HomogeneousPolynomial, index: Mapping[Monomial, int], width: int) -> np.ndarray:
    """Coefficients of u on an indexed basis; monomials missing from the index are dropped"""
    vec = u.field.zeros(width)
    for m, c in u.terms.items():
        col = index.get(m)
        if col is not None:
            vec[col] = c
    return vec


# -- binary-form coprimality -------------------------------------------------

def sylvester_matrix(f: HomogeneousPolynomial, g: HomogeneousPolynomial) -> np.ndarray:
    """Sylvester matrix of two binary forms in the w-exponent coordinates"""
    field = f.field
    m, n = f.degree or 0, g.degree or 0
    size = m + n
    mat = field.zeros((size, size))
    fc, gc = f.binary_coefficients(), g.binary_coefficients()
    for i in range(n):
        mat[i, i:i + m + 1] = fc
    for i in range(m):
        mat[n + i, i:i + n + 1] = gc
    return mat


def binary_forms_coprime(f: HomogeneousPolynomial, g: HomogeneousPolynomial) -> bool:
    """True when two binary forms have no common zero on the projective line"""
    if f.is_zero() or g.is_zero():
        return False
    if not f.is_binary() or not g.is_binary():
        raise ValueError("coprimality is only defined here for forms in z, w")
    size = (f.degree or 0) + (g.degree or 0)
    if size == 0:
        return True
    return rank(sylvester_matrix(f, g), f.field) == size
