"""Constructors for multiple lines and the analysis that reads them back.

Curves live on L: x = y = 0, or on M: z = w = 0 after a variable swap.
Randomized constructions are verification-gated: a curve is returned only
after its degree, genus and type have been recomputed from its ideal.
"""

import logging
from dataclasses import dataclass, field as dataclass_field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from app.config import settings
from app.errors import (
    AtlasError,
    CoprimalityError,
    DegreeMismatchError,
    NotQuasiprimitiveError,
    SupportCollisionError,
    UnsupportedSpecError,
    VerificationError,
)
from app.field import Field, get_field
from app.graded import GradedIdeal, HilbertPolynomial, line_power
from app.line_modules import (
    LineModule,
    annihilator,
    annihilator_slice,
    functional_kernel,
    image_module,
    ideal_of_module,
    module_of,
    quotient_module,
    relation_module,
    torsion_free_twists,
    torsion_saturate,
)
from app.linalg import Echelon, contains, left_kernel, rank
from app.models import QPType, SplittingType
from app.polynomials import (
    HomogeneousPolynomial,
    LINE_SWAP,
    binary_forms_coprime,
    monomial,
    random_binary_form,
    to_vector,
    variables,
    zero,
)

logger = logging.getLogger(__name__)

ON_L, ON_M, ON_BOTH = "L", "M", "L+M"


def default_window(d: int, ell: int = 0, a: int = 0) -> int:
    """Top degree d + l + 2a + margin unless overridden in settings"""
    if settings.WINDOW is not None:
        return settings.WINDOW
    return d + ell + 2 * max(a, 0) + settings.WINDOW_MARGIN


@dataclass
class MultiLineCurve:
    """A saturated ideal of a curve supported on one or both coordinate lines"""

    ideal: GradedIdeal
    support: str
    window: int
    label: str
    hilbert: HilbertPolynomial
    filtration: Optional[List[GradedIdeal]] = None
    qp_type: Optional[QPType] = None
    provenance: Dict[str, Any] = dataclass_field(default_factory=dict)
    parts: Tuple["MultiLineCurve", ...] = ()

    @property
    def degree(self) -> int:
        return self.hilbert.degree

    @property
    def genus(self) -> int:
        return self.hilbert.genus

    @property
    def field(self) -> Field:
        return self.ideal.field

    @property
    def seed(self) -> Optional[int]:
        return self.provenance.get("seed")

    def __repr__(self) -> str:
        return f"MultiLineCurve({self.label}, degree={self.degree}, genus={self.genus}, support={self.support})"


@dataclass(frozen=True)
class TripleData:
    """Binary forms (f, g, p, r, s, t) defining a quasiprimitive triple line of type (a; b)"""

    a: int
    b: int
    f: HomogeneousPolynomial
    g: HomogeneousPolynomial
    p: HomogeneousPolynomial
    r: HomogeneousPolynomial
    s: HomogeneousPolynomial
    t: HomogeneousPolynomial

    @property
    def q(self) -> HomogeneousPolynomial:
        return self.r * self.f * self.f + self.s * self.f * self.g + self.t * self.g * self.g

    def forms(self) -> Tuple[HomogeneousPolynomial, HomogeneousPolynomial]:
        """F = x g - y f and G = p F - r x^2 - s x y - t y^2"""
        x, y, _, _ = variables(self.f.field)
        big_f = x * self.g - y * self.f
        big_g = self.p * big_f - self.r * x * x - self.s * x * y - self.t * y * y
        return big_f, big_g


def _field(field: Optional[Field]) -> Field:
    return field if field is not None else get_field(settings.FIELD_CHAR)


def _binary_monomial(field: Field, k: int, l: int) -> HomogeneousPolynomial:
    return monomial(field, (0, 0, k, l))


def make_curve(ideal: GradedIdeal, support: str, window: int, label: str, **extra) -> MultiLineCurve:
    hilbert = ideal.hilbert_polynomial(window)
    curve = MultiLineCurve(ideal=ideal, support=support, window=window, label=label, hilbert=hilbert, **extra)
    logger.info(f"Built {curve.label}: degree {curve.degree}, genus {curve.genus}")
    return curve


def _check_degree(name: str, form: HomogeneousPolynomial, degree: int) -> None:
    if not form.is_binary():
        raise DegreeMismatchError(f"{name} must be a form in z, w")
    if not form.is_zero() and form.degree != degree:
        raise DegreeMismatchError(f"{name} must have degree {degree}, got {form.degree}")


def line_times(ideal: GradedIdeal, label: str = "") -> GradedIdeal:
    """I_L * I for an ideal whose floor is a power of (x, y)"""
    x, y, _, _ = variables(ideal.field)
    gens = [x * g for g in ideal.generators] + [y * g for g in ideal.generators]
    return GradedIdeal(gens, ideal.field, floor=ideal.floor.product(line_power(1)),
                       label=label or f"I_L*{ideal.label}")


# -- constructors ------------------------------------------------------------

def neighborhood(d: int, field: Optional[Field] = None, window: Optional[int] = None) -> MultiLineCurve:
    """The d-th infinitesimal neighborhood L_d, ideal (x, y)^d"""
    if d < 1:
        raise ValueError(f"neighborhood needs d >= 1, got {d}")
    field = _field(field)
    top = window or default_window(d)
    ideal = GradedIdeal([], field, floor=line_power(d), label=f"L_{d}", saturated_window=(0, top))
    curve = make_curve(ideal, ON_L, top, f"L_{d}", provenance={"recipe": "neighborhood", "d": d})
    if d == 1:
        curve.filtration = [ideal]
    return curve


def line(field: Optional[Field] = None, window: Optional[int] = None) -> MultiLineCurve:
    curve = neighborhood(1, field, window)
    curve.label = "L"
    return curve


def double_line(a: int, f: HomogeneousPolynomial, g: HomogeneousPolynomial,
                window: Optional[int] = None) -> MultiLineCurve:
    """Double line of type a: (x^2, xy, y^2, x g - y f)"""
    if a < 0:
        raise ValueError(f"double_line needs a >= 0, got {a}")
    field = f.field
    _check_degree("f", f, a + 1)
    _check_degree("g", g, a + 1)
    if not binary_forms_coprime(f, g):
        raise CoprimalityError(f"f = {f} and g = {g} have a common zero")
    x, y, _, _ = variables(field)
    top = window or default_window(2, a, a)
    raw = GradedIdeal([x * g - y * f], field, floor=line_power(2), label=f"C2[a={a}]")
    ideal = raw.saturate(top)
    curve = make_curve(ideal, ON_L, top, f"double({a})",
                    qp_type=QPType(a=a), provenance={"recipe": "double", "a": a, "f": str(f), "g": str(g)})
    curve.filtration = [line(field, top).ideal, ideal]
    return curve


def good_triple_data(a: int, b: int, field: Optional[Field] = None) -> TripleData:
    """f = z^(a+1), g = w^(a+1), p = z^ceil(b/2) w^floor(b/2), r = z^(a+b), s = 0, t = w^(a+b)"""
    field = _field(field)
    return TripleData(
        a=a, b=b,
        f=_binary_monomial(field, a + 1, 0),
        g=_binary_monomial(field, 0, a + 1),
        p=_binary_monomial(field, (b + 1) // 2, b // 2),
        r=_binary_monomial(field, a + b, 0),
        s=zero(field, a + b),
        t=_binary_monomial(field, 0, a + b),
    )


def random_triple_data(a: int, b: int, rng: np.random.Generator, field: Optional[Field] = None,
                       max_draws: int = 50) -> TripleData:
    """Random admissible data: (f, g) coprime and p coprime to q"""
    field = _field(field)
    for _ in range(max_draws):
        f = random_binary_form(field, a + 1, rng)
        g = random_binary_form(field, a + 1, rng)
        if not binary_forms_coprime(f, g):
            continue
        data = TripleData(
            a=a, b=b, f=f, g=g,
            p=random_binary_form(field, b, rng),
            r=random_binary_form(field, a + b, rng),
            s=random_binary_form(field, a + b, rng),
            t=random_binary_form(field, a + b, rng),
        )
        if binary_forms_coprime(data.p, data.q):
            return data
    raise CoprimalityError(f"no admissible type ({a}; {b}) data in {max_draws} draws")


def triple_line(a: int, b: int, f: HomogeneousPolynomial, g: HomogeneousPolynomial,
                p: HomogeneousPolynomial, r: HomogeneousPolynomial, s: HomogeneousPolynomial,
                t: HomogeneousPolynomial, window: Optional[int] = None) -> MultiLineCurve:
    """Quasiprimitive triple line of type (a; b): I_L^3 + (xF, yF, G)"""
    if a < 0 or b < 0:
        raise ValueError(f"triple_line needs a, b >= 0, got ({a}; {b})")
    data = TripleData(a, b, f, g, p, r, s, t)
    for name, form, degree in (("f", f, a + 1), ("g", g, a + 1), ("p", p, b),
                               ("r", r, a + b), ("s", s, a + b), ("t", t, a + b)):
        _check_degree(name, form, degree)
    if not binary_forms_coprime(f, g):
        raise CoprimalityError(f"f = {f} and g = {g} have a common zero")
    if not binary_forms_coprime(p, data.q):
        raise CoprimalityError(f"p = {p} and q = {data.q} have a common zero")
    field = f.field
    x, y, _, _ = variables(field)
    big_f, big_g = data.forms()
    top = window or default_window(3, a, a)
    raw = GradedIdeal([x * big_f, y * big_f, big_g], field, floor=line_power(3), label=f"C3[{a};{b}]")
    ideal = raw.saturate(top)
    double = double_line(a, f, g, top)
    curve = make_curve(ideal, ON_L, top, f"triple({a};{b})", qp_type=QPType(a=a, b=(b,)),
                    provenance={"recipe": "triple", "a": a, "b": b,
                                "forms": {k: str(v) for k, v in zip("fgprst", (f, g, p, r, s, t))}})
    curve.filtration = [double.filtration[0], double.ideal, ideal]
    return curve


def triple_from_data(data: TripleData, window: Optional[int] = None) -> MultiLineCurve:
    return triple_line(data.a, data.b, data.f, data.g, data.p, data.r, data.s, data.t, window)


def _reseed_plan(seed: int, attempts: Optional[int]) -> List[int]:
    return [seed + k for k in range(attempts or settings.RESEED_ATTEMPTS)]


def quadruple_ideal_j(data: TripleData, top: int) -> GradedIdeal:
    """sat(I_L I_C3 + I_C2^2) = sat(I_L^4 + (F^2, xG, yG, x^2 F, xy F, y^2 F))"""
    x, y, _, _ = variables(data.f.field)
    big_f, big_g = data.forms()
    raw = GradedIdeal([big_f * big_f, x * big_g, y * big_g, x * x * big_f, x * y * big_f, y * y * big_f],
                      data.f.field, floor=line_power(4), label="J")
    return raw.saturate(top)


def quadruple_line(data: TripleData, seed: Optional[int] = None, window: Optional[int] = None,
                   attempts: Optional[int] = None) -> MultiLineCurve:
    """Quasiprimitive quadruple line over the triple line of `data`.

    I_C = sat(J + (xi)) with J = I_L I_C3 + I_C2^2 and xi a seeded lift of
    a minimal generator of I_C3 / sat(J) in a degree above the initial one.
    """
    seed = settings.DEFAULT_SEED if seed is None else seed
    a, b = data.a, data.b
    top = window or default_window(4, a, a)
    triple = triple_from_data(data, top)
    field = triple.field
    j_sat = quadruple_ideal_j(data, top)
    numerator = module_of(triple.ideal, 4, top, label="I_C3/I_L^4")
    quotient = quotient_module(numerator, module_of(j_sat, 4, top, label="J/I_L^4"), label="I_C3/J")
    counts = quotient.minimal_generator_counts()
    degrees = sorted(counts)
    expected_degree = a + b + 2
    candidates = [n for n in degrees[1:] if n == expected_degree] + [n for n in degrees[1:] if n != expected_degree]
    if not candidates:
        candidates = degrees
    logger.info(f"I_C3/J generators by degree {counts}; trying extension degrees {candidates}")
    expected = QPType(a=a, b=(b, b))
    floor4 = line_power(4)
    tried: List[int] = []
    failures: Dict[str, str] = {}
    for attempt_seed in _reseed_plan(seed, attempts):
        tried.append(attempt_seed)
        rng = np.random.default_rng(attempt_seed)
        for degree in candidates:
            xi = None
            for _ in range(8):
                candidate = triple.ideal.random_element(degree, rng)
                vec = to_vector(candidate, floor4.index(degree), floor4.width(degree))
                if not contains(quotient._lower_part(degree), vec[None, :], field):
                    xi = candidate
                    break
            if xi is None:
                continue
            try:
                ideal = j_sat.extend([xi], label=f"C4[{a};{b},{b}]").saturate(top)
                curve = make_curve(ideal, ON_L, top, f"quadruple({a};{b},{b})",
                                provenance={"recipe": "quadruple", "a": a, "b": b, "seed": attempt_seed,
                                            "attempts": list(tried), "extension_degree": degree,
                                            "quotient_generators": {str(k): v for k, v in counts.items()}})
                _verify_extension(curve, 4, expected, expected_sub=[triple.filtration[1], triple.ideal],
                                  exact=(b == 2))
                return curve
            except AtlasError as e:
                failures[f"{attempt_seed}@{degree}"] = str(e)
                logger.warning(f"Quadruple extension with seed {attempt_seed} in degree {degree} rejected: {e}")
    raise VerificationError(f"no quadruple line of type {expected} passed verification", tried, failures)


def _verify_extension(curve: MultiLineCurve, degree: int, expected: QPType,
                      expected_sub: Sequence[GradedIdeal] = (), exact: bool = True) -> None:
    """Degree, genus, retained subcurves and type of a freshly extended curve.

    With exact=False only a and the leading b entries of `expected` are
    imposed and the genus is matched against the type actually found.
    """
    if curve.degree != degree:
        raise VerificationError(f"{curve.label}: degree {curve.degree}, expected {degree}")
    if exact and curve.genus != expected.genus():
        raise VerificationError(f"{curve.label}: genus {curve.genus}, expected {expected.genus()}")
    filtration = cm_filtration(curve)
    for j, sub in enumerate(expected_sub, start=2):
        if not filtration[j - 1].same_as(sub, curve.window):
            raise VerificationError(f"{curve.label}: C_{j} differs from the curve it was built on")
    found = extract_type(curve, filtration)
    if exact and found != expected:
        raise VerificationError(f"{curve.label}: type {found}, expected {expected}")
    if not exact:
        prefix = expected.b[:len(expected.b) - 1]
        if found.a != expected.a or found.b[:len(prefix)] != prefix:
            raise VerificationError(f"{curve.label}: type {found} does not extend {expected}")
        if curve.genus != found.genus():
            raise VerificationError(f"{curve.label}: genus {curve.genus} disagrees with type {found}")
    curve.filtration = filtration
    curve.qp_type = found


def retraction_space(curve: MultiLineCurve, a: int) -> Tuple[LineModule, Echelon]:
    """The module I_C mod I_L^(d+1) and the retractions of its conormal sheaf onto O_L(da).

    Retractions are the degree-da elements of Hom(I_C / I_L I_C, A); they form
    a space of dimension (d+1)a + 4 (constants on O_L(da) plus the forms of
    degree (d+1)a + 2 on O_L(-a-2)).
    """
    d, top = curve.degree, curve.window
    numerator = image_module(curve.ideal, d + 1, top, label=f"{curve.label} mod I_L^{d + 1}")
    relations = module_of(line_times(curve.ideal), d + 1, top, label=f"I_L*{curve.label} mod I_L^{d + 1}")
    conormal = relation_module(numerator, relations, label=f"conormal({curve.label})")
    twists = sorted(annihilator(conormal).degrees)
    if twists != [-a - 2, d * a]:
        raise NotQuasiprimitiveError(f"{curve.label}: conormal twists {twists}, expected {[-a - 2, d * a]}")
    space = annihilator_slice(conormal, d * a)
    expected_dim = (d + 1) * a + 4
    if space.rank != expected_dim:
        raise VerificationError(f"{curve.label}: {space.rank} retractions in degree {d * a}, expected {expected_dim}")
    return numerator, space


def primitive_extension(curve: MultiLineCurve, seed: Optional[int] = None, attempts: Optional[int] = None,
                        min_surface: Optional[int] = None) -> MultiLineCurve:
    """A primitive (d+1)-line of type a containing the primitive d-line `curve`.

    I_new / I_L I_C is the kernel of a seeded general retraction of the
    conormal sheaf of C onto O_L(da). With `min_surface`, extensions lying on
    a surface of lower degree are rejected and reseeded.
    """
    if curve.support != ON_L:
        raise SupportCollisionError("primitive_extension works on curves supported on x=y=0")
    qp = curve.qp_type or extract_type(curve)
    if qp.a < 0:
        raise AtlasError(f"primitive extension needs type a >= 0, got a = {qp.a}")
    if not qp.is_primitive():
        raise NotQuasiprimitiveError(f"{curve.label} has type {qp}, not primitive")
    seed = settings.DEFAULT_SEED if seed is None else seed
    d, a, top = curve.degree, qp.a, curve.window
    field = curve.field
    numerator, retractions = retraction_space(curve, a)
    expected = QPType(a=a, b=(0,) * (d - 1))
    tried: List[int] = []
    failures: Dict[str, str] = {}
    for attempt_seed in _reseed_plan(seed, attempts):
        tried.append(attempt_seed)
        rng = np.random.default_rng(attempt_seed)
        coeffs = field.random_elements(rng, retractions.rank)
        beta = field.matmul(coeffs[None, :], retractions.rows)[0]
        try:
            kernel = functional_kernel(numerator, beta, d * a, label=f"ker(beta) in {curve.label}")
            ideal = ideal_of_module(kernel, field, label=f"P{d + 1}[{a}]").saturate(top)
            extended = make_curve(ideal, ON_L, top, f"primitive{d + 1}({a})",
                               provenance={"recipe": "primitive", "d": d + 1, "a": a, "seed": attempt_seed,
                                           "attempts": list(tried), "base": curve.label})
            _verify_extension(extended, d + 1, expected, expected_sub=curve.filtration[1:] if curve.filtration else ())
            twists = sorted(conormal_restriction(extended).twists)
            if twists != [-a - 2, (d + 1) * a]:
                raise VerificationError(f"{extended.label}: conormal twists {twists}")
            if min_surface is not None:
                s = extended.ideal.min_surface_degree(top)
                if s < min_surface:
                    raise VerificationError(f"{extended.label}: lies on a surface of degree {s}")
            return extended
        except AtlasError as e:
            failures[str(attempt_seed)] = str(e)
            logger.warning(f"Primitive extension of {curve.label} with seed {attempt_seed} rejected: {e}")
    raise VerificationError(f"no primitive {d + 1}-line of type {a} passed verification", tried, failures)


def primitive_line(d: int, a: int, seed: Optional[int] = None, field: Optional[Field] = None,
                   window: Optional[int] = None, ell: int = 0, min_surface: Optional[int] = None) -> MultiLineCurve:
    """Primitive d-line of type a by iterated general extension of a random double line.

    `min_surface` is imposed on the final extension only.
    """
    if d < 2:
        raise ValueError(f"primitive_line needs d >= 2, got {d}")
    field = _field(field)
    seed = settings.DEFAULT_SEED if seed is None else seed
    top = window or default_window(d, ell, a)
    rng = np.random.default_rng(seed)
    while True:
        f, g = random_binary_form(field, a + 1, rng), random_binary_form(field, a + 1, rng)
        if binary_forms_coprime(f, g):
            break
    curve = double_line(a, f, g, top)
    curve.provenance["seed"] = seed
    for step in range(2, d):
        curve = primitive_extension(curve, seed=seed + 101 * step,
                                    min_surface=min_surface if step == d - 1 else None)
    return curve


def on_second_line(curve: MultiLineCurve) -> MultiLineCurve:
    """The same curve moved to z = w = 0 by x <-> z, y <-> w"""
    if curve.support != ON_L:
        raise SupportCollisionError(f"{curve.label} is not supported on x=y=0")
    ideal = curve.ideal.permute(LINE_SWAP, label=f"{curve.ideal.label}'")
    filtration = [i.permute(LINE_SWAP) for i in curve.filtration] if curve.filtration else None
    return replace(curve, ideal=ideal, support=ON_M, label=f"{curve.label}'", filtration=filtration,
                   provenance=dict(curve.provenance, moved="z=w=0"))


def disjoint_union(first: MultiLineCurve, second: MultiLineCurve, window: Optional[int] = None) -> MultiLineCurve:
    """Union of a curve on x=y=0 and a curve on z=w=0: the intersection of their ideals"""
    if first.support != ON_L or second.support != ON_M:
        raise SupportCollisionError(
            f"disjoint_union needs supports L and M, got {first.support} and {second.support}"
        )
    top = window or max(first.window, second.window)
    ideal = first.ideal.intersect(second.ideal, top)
    ideal.label = f"{first.label} u {second.label}"
    curve = make_curve(ideal, ON_BOTH, top, f"{first.label} u {second.label}", parts=(first, second),
                    provenance={"recipe": "union", "parts": [first.label, second.label]})
    if curve.degree != first.degree + second.degree:
        raise VerificationError(f"{curve.label}: degree {curve.degree} is not additive")
    if curve.genus != first.genus + second.genus - 1:
        raise VerificationError(f"{curve.label}: genus {curve.genus} != {first.genus} + {second.genus} - 1")
    return curve


def cdl_curve(d: int, ell: int, seed: Optional[int] = None, field: Optional[Field] = None,
              window: Optional[int] = None) -> MultiLineCurve:
    """A C_{d,l} curve for d <= 4 from the standard recipes"""
    field = _field(field)
    if d == 1:
        return line(field, window or default_window(1, ell, 0))
    if d == 2:
        data = good_triple_data(ell, 0, field)
        return double_line(ell, data.f, data.g, window)
    if d == 3:
        return triple_from_data(good_triple_data(ell, 1, field), window)
    if d == 4:
        return quadruple_line(good_triple_data(ell, 2, field), seed=seed, window=window)
    raise UnsupportedSpecError(f"no standard C_(d,l) recipe for d = {d}")


# -- analysis ----------------------------------------------------------------

def line_exponent(ideal: GradedIdeal) -> int:
    """Smallest j with (x, y)^j inside the ideal"""
    field = ideal.field
    bound = ideal.floor.line_power_exponent()
    limit = bound if bound is not None else ideal.max_generator_degree() + 1
    for j in range(1, limit + 1):
        if all(ideal.contains_form(monomial(field, m)) for m in line_power(j).generators):
            return j
    raise NotQuasiprimitiveError(f"{ideal.label}: no power of (x, y) up to {limit} lies in the ideal")


def cm_filtration(curve: MultiLineCurve) -> List[GradedIdeal]:
    """I_{C_1} contains I_{C_2} contains ... contains I_{C_k} = I_C"""
    if curve.support != ON_L:
        raise SupportCollisionError("cm_filtration works on curves supported on x=y=0")
    ideal, top, field = curve.ideal, curve.window, curve.field
    k = line_exponent(ideal)
    filtration: List[GradedIdeal] = []
    for j in range(1, k):
        image = image_module(ideal, j, top, label=f"image in L_{j}")
        saturated = torsion_saturate(image, label=f"C_{j}")
        filtration.append(ideal_of_module(saturated, field, label=f"C_{j}", saturated_window=(0, top)))
    filtration.append(ideal)
    for j in range(1, len(filtration)):
        bigger, smaller = filtration[j - 1], filtration[j]
        if not bigger.contains_ideal(smaller, top):
            raise VerificationError(f"{curve.label}: C_{j} does not contain C_{j + 1}")
        if not smaller.contains_ideal(line_times(bigger), top):
            raise VerificationError(f"{curve.label}: I_L I_(C_{j}) is not inside I_(C_{j + 1})")
    return filtration


def extract_type(curve: MultiLineCurve, filtration: Optional[List[GradedIdeal]] = None) -> QPType:
    """Type (a; b_2, ..., b_{d-1}) from the linear tails of the filtration quotients"""
    filtration = filtration or curve.filtration or cm_filtration(curve)
    top = curve.window
    k = settings.STABILIZATION_DEGREES
    if len(filtration) < 2:
        raise NotQuasiprimitiveError(f"{curve.label} is a line and has no type")
    for j, ideal in enumerate(filtration, start=1):
        degree = ideal.hilbert_polynomial(top).degree
        if degree != j:
            raise NotQuasiprimitiveError(f"{curve.label}: C_{j} has degree {degree}, not {j}")
    twists = []
    for j in range(1, len(filtration)):
        upper, lower = filtration[j - 1], filtration[j]
        values = [lower.codim(n) - upper.codim(n) for n in range(top - k, top + 1)]
        steps = {values[i + 1] - values[i] for i in range(k)}
        if len(steps) != 1:
            raise VerificationError(f"{curve.label}: quotient C_{j}/C_{j + 1} tail not linear: {values}")
        if steps != {1}:
            raise NotQuasiprimitiveError(f"{curve.label}: quotient C_{j}/C_{j + 1} has rank {steps.pop()}")
        twists.append(values[-1] - top - 1)
    a = twists[0]
    try:
        return QPType(a=a, b=tuple(t - j * a for j, t in enumerate(twists[1:], start=2)))
    except ValidationError as e:
        raise VerificationError(f"{curve.label}: extracted twists {twists} do not form a type: {e}") from e


def conormal_restriction(curve: MultiLineCurve) -> SplittingType:
    """Twists of I_C / (I_L I_C), modulo torsion, as a sheaf on the line.

    Defined for the line, primitive lines (twists da, -a-2) and
    quasiprimitive lines of type (a; 0, ..., 0, b) (twists da+b, -a-b-2).
    """
    if curve.support != ON_L:
        raise SupportCollisionError("conormal_restriction works on curves supported on x=y=0")
    if curve.degree > 1:
        qp = curve.qp_type = curve.qp_type or extract_type(curve)
        if any(qp.b[:-1]):
            raise UnsupportedSpecError(f"{curve.label}: no conormal restriction for type {qp}")
    d, top = line_exponent(curve.ideal), curve.window
    numerator = image_module(curve.ideal, d + 1, top, label=f"{curve.label} mod I_L^{d + 1}")
    relations = module_of(line_times(curve.ideal), d + 1, top, label=f"I_L*{curve.label} mod I_L^{d + 1}")
    return torsion_free_twists(relation_module(numerator, relations, label=f"conormal({curve.label})"))


# -- the beta matrix ---------------------------------------------------------

BETA_ROWS = ("x^3", "x^2y", "xy^2", "y^3", "xF", "yF", "G")
BETA_COLUMNS = ("F^2", "H1", "H2", "x^2F", "xyF", "y^2F")


@dataclass
class BetaMatrix:
    """The 7 x 6 matrix of binary forms relating the generators of I_C3 and of J"""

    data: TripleData
    entries: List[List[HomogeneousPolynomial]]
    syzygy: List[HomogeneousPolynomial]

    @property
    def field(self) -> Field:
        return self.data.f.field

    def source_degrees(self) -> List[int]:
        a, b = self.data.a, self.data.b
        return [2 * a + 4, a + b + 3, a + b + 3, a + 4, a + 4, a + 4]

    def target_degrees(self) -> List[int]:
        a, b = self.data.a, self.data.b
        return [3, 3, 3, 3, a + 3, a + 3, a + b + 2]

    def apply_syzygy(self) -> List[HomogeneousPolynomial]:
        out = []
        for row in self.entries:
            total = zero(self.field)
            for entry, value in zip(row, self.syzygy):
                total = total + entry * value
            out.append(total)
        return out

    def evaluate(self, z: int, w: int) -> np.ndarray:
        field = self.field
        return field.array([[entry.evaluate_binary(z, w) for entry in row] for row in self.entries])

    def generic_rank(self, rng: np.random.Generator, points: int = 6) -> int:
        """Largest rank over random specializations of (z, w); exact once it meets the syzygy bound"""
        field = self.field
        best = 0
        for _ in range(points):
            z, w = (int(v) for v in field.random_elements(rng, 2))
            best = max(best, rank(self.evaluate(z, w), field))
        return best

    def degreewise_matrix(self, n: int) -> np.ndarray:
        """The map on sections in degree n: rows index the source basis, columns the target basis"""
        field = self.field
        src, tgt = self.source_degrees(), self.target_degrees()
        src_dims = [max(0, n - e + 1) for e in src]
        tgt_dims = [max(0, n - e + 1) for e in tgt]
        src_off = np.concatenate([[0], np.cumsum(src_dims)[:-1]]).astype(int)
        tgt_off = np.concatenate([[0], np.cumsum(tgt_dims)[:-1]]).astype(int)
        mat = field.zeros((sum(src_dims), sum(tgt_dims)))
        for j, row in enumerate(self.entries):
            for i, entry in enumerate(row):
                if entry.is_zero() or not src_dims[i] or not tgt_dims[j]:
                    continue
                coeffs = field.array(entry.binary_coefficients())
                for t in range(src_dims[i]):
                    start = tgt_off[j] + t
                    mat[src_off[i] + t, start:start + len(coeffs)] = coeffs
        return mat

    def kernel_dimension(self, n: int) -> int:
        """dim of the kernel of beta on sections in degree n"""
        matrix = self.degreewise_matrix(n)
        if matrix.shape[0] == 0:
            return 0
        return left_kernel(matrix, self.field).shape[0]


def beta_matrix(data: TripleData) -> BetaMatrix:
    """The matrix of beta for type (a; b) data with its syzygy [p, -g, f, -r, -s, -t]"""
    f, g, p, r, s, t = data.f, data.g, data.p, data.r, data.s, data.t
    o = zero(f.field)
    entries = [
        [o, -r, o, g, o, o],
        [o, -s, -r, -f, g, o],
        [o, -t, -s, o, -f, g],
        [o, o, -t, o, o, -f],
        [g, p, o, o, o, o],
        [-f, o, p, o, o, o],
        [o, o, o, o, o, o],
    ]
    return BetaMatrix(data=data, entries=entries, syzygy=[p, -g, f, -r, -s, -t])


def beta_identity(data: TripleData) -> HomogeneousPolynomial:
    """p F^2 - g H1 + f H2 - r x^2 F - s x y F - t y^2 F with H1 = x G, H2 = y G"""
    x, y, _, _ = variables(data.f.field)
    big_f, big_g = data.forms()
    return (data.p * big_f * big_f - data.g * (x * big_g) + data.f * (y * big_g)
            - data.r * x * x * big_f - data.s * x * y * big_f - data.t * y * y * big_f)
