"""Closed-form invariants and the C_{d,l} decision procedures."""

import logging
from typing import Dict, List, Optional, Sequence

from sympy import binomial

from app.errors import (
    ContainmentError,
    CriteriaDisagreementError,
    DegreeMismatchError,
    NotFreeError,
    NotQuasiprimitiveError,
    UnsupportedSpecError,
    VerificationError,
)
from app.factory import ON_L, ON_M, MultiLineCurve, extract_type
from app.graded import ambient_dimension, line_power
from app.line_modules import module_of, splitting_type
from app.models import (
    Certification,
    CurveReport,
    FamilyKind,
    FamilyMember,
    FamilySpec,
    QPType,
    SplittingType,
)
from app.config import settings
from app.polynomials import LINE_SWAP

logger = logging.getLogger(__name__)

CONDITION_ELLS = range(4)

# Undecided (5, 0) candidates named in the classification; anything else the filters keep is flagged.
KNOWN_CANDIDATES: Dict[tuple, List[QPType]] = {
    (5, 0): [QPType(a=1, b=(0, 0, 0)), QPType(a=0, b=(2, 2, 6)), QPType(a=0, b=(2, 3, 5))],
}


def choose(n: int, k: int) -> int:
    return int(binomial(n, k))


def beorchia_bound(d: int, s: int) -> int:
    """Maximal genus of a degree-d curve lying on no surface of degree < s"""
    if s < 1 or s > d:
        raise ValueError(f"beorchia_bound needs 1 <= s <= d, got d={d}, s={s}")
    if d <= 2 * s:
        return (s - 1) * d + 1 - choose(s + 2, 3)
    return choose(d - s, 2) - choose(s - 1, 3)


def cdl_genus(d: int, ell: int) -> int:
    """Genus of a C_{d,l}: B(d,d) - l * C(d,2)"""
    if d < 1 or ell < 0:
        raise ValueError(f"cdl_genus needs d >= 1 and l >= 0, got d={d}, l={ell}")
    return -(d - 1) - choose(d, 3) - ell * choose(d, 2)


def qp_genus(qp: QPType, d: Optional[int] = None) -> int:
    if d is not None and d != qp.degree:
        raise DegreeMismatchError(f"type {qp} belongs to degree {qp.degree}, not {d}")
    return qp.genus()


def neighborhood_genus(d: int) -> int:
    return 1 - sum((i + 1) * (1 - i) for i in range(d))


def genus_from_splitting(twists: Sequence[int], d: int) -> int:
    """Genus of C from the twists {-e_i} of I_C / I_L^d"""
    return neighborhood_genus(d) + sum(1 + t for t in twists)


def _primitive_dimension(d: int, a: int) -> int:
    return a * (d - 1) * (d + 2) // 2 + 3 * d + 1


def _require(spec: FamilySpec, *names: str) -> List[int]:
    values = [getattr(spec, name) for name in names]
    if any(v is None for v in values):
        raise UnsupportedSpecError(f"{spec.kind.value} family needs {', '.join(names)}")
    return values


def family_dimension(spec: FamilySpec) -> int:
    """Dimension of the family of curves described by `spec`"""
    kind = spec.kind
    if kind == FamilyKind.LINE:
        return 4
    if kind == FamilyKind.PRIMITIVE:
        d, a = _require(spec, "d", "a")
        if d < 2:
            raise UnsupportedSpecError(f"primitive families start at d = 2, got {d}")
        return _primitive_dimension(d, a)
    if kind == FamilyKind.TRIPLE:
        a, b = _require(spec, "a", "b")
        return 5 * a + 2 * b + 10
    if kind == FamilyKind.QUADRUPLE:
        a, b, c = _require(spec, "a", "b", "c")
        return 9 * a + 2 * b + 2 * c + 13
    if kind == FamilyKind.TAIL:
        d, a, b = _require(spec, "d", "a", "b")
        if d < 3:
            raise UnsupportedSpecError(f"tail families start at d = 3, got {d}")
        return _primitive_dimension(d, a) + 2 * b
    if kind == FamilyKind.TAIL_PAIR:
        d, a, b, c = _require(spec, "d", "a", "b", "c")
        if d < 4:
            raise UnsupportedSpecError(f"tail-pair families start at d = 4, got {d}")
        return family_dimension(FamilySpec(kind=FamilyKind.TAIL, d=d - 1, a=a, b=b)) + d * a + 2 * c + 3
    if kind == FamilyKind.UNION:
        if len(spec.parts) < 2:
            raise UnsupportedSpecError("a union family needs at least two parts")
        return sum(family_dimension(part) for part in spec.parts)
    raise UnsupportedSpecError(f"no closed form for {kind}")


def _cdl_spec(k: int, ell: int) -> FamilySpec:
    if k == 1:
        return FamilySpec(kind=FamilyKind.LINE)
    if k == 2:
        return FamilySpec(kind=FamilyKind.PRIMITIVE, d=2, a=ell)
    if k == 3:
        return FamilySpec(kind=FamilyKind.TRIPLE, a=ell, b=1)
    if k == 4:
        return FamilySpec(kind=FamilyKind.QUADRUPLE, a=ell, b=2, c=2)
    raise UnsupportedSpecError(f"no C_(k,l) family for k = {k}")


def maximum_genus_families(d: int) -> List[FamilyMember]:
    """Families of degree-d curves of genus B(d, d) for 2 <= d <= 5"""
    if d == 5:
        members = [FamilyMember(name="primitive quintuple line of type 1",
                                spec=FamilySpec(kind=FamilyKind.PRIMITIVE, d=5, a=1), dimension=0)]
    elif d == 4:
        members = [FamilyMember(name="quasiprimitive quadruple line of type (0; 2, 2)",
                                spec=_cdl_spec(4, 0), dimension=0, parts=[(4, 0)])]
    elif d in (2, 3):
        members = [FamilyMember(name=f"C_({d},0)", spec=_cdl_spec(d, 0), dimension=0, parts=[(d, 0)])]
    else:
        raise UnsupportedSpecError(f"maximum-genus families are tabulated for 2 <= d <= 5, got {d}")
    for k in range(1, d // 2 + 1):
        parts = [(k, d - k), (d - k, k)]
        if d == 4 and k == 2:
            name = "two disjoint double lines of genus -3"
        else:
            name = f"C_({k},{d - k}) u C_({d - k},{k})"
        spec = FamilySpec(kind=FamilyKind.UNION, parts=[_cdl_spec(*p) for p in parts])
        members.append(FamilyMember(name=name, spec=spec, dimension=0, parts=parts))
    for member in members:
        member.dimension = family_dimension(member.spec)
    return members


def min_surface_degree(curve: MultiLineCurve) -> int:
    """s(C): least degree of a surface containing C"""
    return curve.ideal.min_surface_degree(curve.window)


def _on_first_line(curve: MultiLineCurve) -> MultiLineCurve:
    if curve.support == ON_L:
        return curve
    if curve.support == ON_M:
        ideal = curve.ideal.permute(LINE_SWAP, label=curve.ideal.label)
        filtration = [i.permute(LINE_SWAP) for i in curve.filtration] if curve.filtration else None
        return MultiLineCurve(ideal=ideal, support=ON_L, window=curve.window, label=curve.label,
                              hilbert=curve.hilbert, filtration=filtration, qp_type=curve.qp_type,
                              provenance=curve.provenance)
    raise NotQuasiprimitiveError(f"{curve.label} is not supported on a single line")


def check_condition(curve: MultiLineCurve, d: int, ell: int) -> bool:
    """Every surface of degree <= l + d - 1 through C contains L_d"""
    if curve.degree != d:
        raise DegreeMismatchError(f"{curve.label} has degree {curve.degree}, not {d}")
    curve = _on_first_line(curve)
    floor = line_power(d)
    return all(curve.ideal.dim(n) == floor.dimension(n) for n in range(ell + d))


def _h0_criterion(curve: MultiLineCurve, d: int, ell: int) -> bool:
    n = ell + d - 1
    return curve.genus == cdl_genus(d, ell) and curve.ideal.dim(n) == line_power(d).dimension(n)


def _h1_criterion(curve: MultiLineCurve, d: int, ell: int) -> bool:
    n = ell + d - 1
    chi = ambient_dimension(n) - (d * n + 1 - curve.genus)
    h1 = curve.ideal.dim(n) - chi
    return curve.genus == cdl_genus(d, ell) and h1 == 0


def curve_splitting(curve: MultiLineCurve) -> Optional[SplittingType]:
    """Splitting type of I_C / I_L^d, or None when it is not certified free"""
    curve = _on_first_line(curve)
    try:
        module = module_of(curve.ideal, curve.degree, curve.window, label=f"{curve.label}/L_{curve.degree}")
        return splitting_type(module)
    except (NotFreeError, ContainmentError) as e:
        logger.warning(f"No splitting type for {curve.label}: {e}")
        return None


def _type_of(curve: MultiLineCurve) -> Optional[QPType]:
    if curve.qp_type is not None:
        return curve.qp_type
    if curve.degree < 2:
        return None
    try:
        curve.qp_type = extract_type(_on_first_line(curve))
    except (NotQuasiprimitiveError, VerificationError) as e:
        logger.info(f"{curve.label} has no quasiprimitive type: {e}")
        return None
    return curve.qp_type


def describe(curve: MultiLineCurve) -> CurveReport:
    """Every invariant of C that does not depend on a choice of l"""
    single = curve.support in (ON_L, ON_M)
    splitting = curve_splitting(curve) if single else None
    qp = _type_of(curve) if single else None
    notes = []
    if splitting is not None and genus_from_splitting(splitting.twists, curve.degree) != curve.genus:
        notes.append("genus from splitting type disagrees with the Hilbert polynomial")
    if curve.parts:
        notes.append(f"union of {', '.join(part.label for part in curve.parts)}")
    elif not single:
        notes.append("not supported on a coordinate line; only Hilbert data reported")
    flags = {}
    if single:
        flags = {f"{curve.degree},{ell}": check_condition(curve, curve.degree, ell) for ell in CONDITION_ELLS}
    attempts = curve.provenance.get("attempts", [])
    return CurveReport(
        label=curve.label,
        support=curve.support,
        degree=curve.degree,
        genus=curve.genus,
        s_value=min_surface_degree(curve),
        splitting=splitting,
        qp_type=qp,
        quasiprimitive=(qp is not None or curve.degree == 1) if single else None,
        hilbert_function=curve.ideal.hilbert_function((0, curve.window)),
        condition_flags=flags,
        certification=Certification(
            field_char=curve.field.characteristic,
            seed=curve.seed,
            window=(0, curve.window),
            stabilization_degrees=settings.STABILIZATION_DEGREES,
            attempts=list(attempts),
        ),
        notes=notes,
    )


def is_cdl(curve: MultiLineCurve, d: int, ell: int) -> CurveReport:
    """Evaluate the three equivalent C_{d,l} criteria and insist they agree"""
    if curve.degree != d:
        raise DegreeMismatchError(f"{curve.label} has degree {curve.degree}, not {d}")
    report = describe(curve)
    flags = {
        "h0": _h0_criterion(_on_first_line(curve), d, ell),
        "h1": _h1_criterion(_on_first_line(curve), d, ell),
    }
    if report.splitting is not None:
        flags["splitting"] = report.splitting.matches([-(d + ell)] * choose(d, 2))
    if len(set(flags.values())) > 1:
        raise CriteriaDisagreementError(f"{curve.label} at (d, l) = ({d}, {ell}): {flags}")
    report.ell = ell
    report.cdl_flags = flags
    report.is_cdl = flags["h0"]
    report.condition_flags.setdefault(f"{d},{ell}", check_condition(curve, d, ell))
    return report


def genus_bound_check(curve: MultiLineCurve, ell: int) -> bool:
    """g(C) <= g(C_{d,l}) for a curve satisfying the condition at l"""
    d = curve.degree
    if not check_condition(curve, d, ell):
        raise ContainmentError(f"{curve.label} does not satisfy the condition at (d, l) = ({d}, {ell})")
    bound = cdl_genus(d, ell)
    if curve.genus > bound:
        logger.error(f"{curve.label}: genus {curve.genus} exceeds the bound {bound} at l = {ell}")
        return False
    return True


def _compositions(total: int, parts: int) -> List[tuple]:
    if parts == 0:
        return [()] if total == 0 else []
    return [(first,) + rest for first in range(total + 1) for rest in _compositions(total - first, parts - 1)]


def _passes_subcurve_filters(qp: QPType, ell: int) -> bool:
    if qp.a != ell or not qp.b:
        return True
    b2 = qp.b[0]
    if b2 < 1:
        return False
    return qp.degree < 4 or b2 >= 2


def admissible_types(d: int, ell: int, apply_subcurve_filters: bool = False) -> List[QPType]:
    """Types allowed by the genus count, in increasing (a, b) order"""
    if d < 2 or ell < 0:
        raise ValueError(f"admissible_types needs d >= 2 and l >= 0, got d={d}, l={ell}")
    found = []
    for a in range(ell, ell + (d - 2) // 3 + 1):
        total = choose(d, 3) - (a - ell) * choose(d, 2)
        if total < 0:
            continue
        for b in _compositions(total, d - 2):
            qp = QPType.model_construct(a=a, b=b)
            if not qp.is_superadditive():
                continue
            if apply_subcurve_filters and not _passes_subcurve_filters(qp, ell):
                continue
            found.append(QPType(a=a, b=b))
    return sorted(found, key=lambda t: (t.a, t.b))


def numerology_discrepancies(d: int, ell: int) -> List[QPType]:
    """Filtered types missing from the known candidate list for (d, l)"""
    known = KNOWN_CANDIDATES.get((d, ell))
    if known is None:
        return []
    extra = [t for t in admissible_types(d, ell, apply_subcurve_filters=True) if t not in known]
    for t in extra:
        logger.warning(f"Type {t} passes every numerical filter at (d, l) = ({d}, {ell}) but is not a known candidate")
    return extra
