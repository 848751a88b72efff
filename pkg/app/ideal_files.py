"""Reading and writing IdealFile JSON."""

import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

from pydantic import ValidationError

from app.errors import AtlasError, MalformedIdealFileError
from app.factory import (
    ON_BOTH,
    ON_L,
    ON_M,
    MultiLineCurve,
    cm_filtration,
    default_window,
    extract_type,
    make_curve,
    on_second_line,
)
from app.field import Field, get_field
from app.graded import EMPTY_FLOOR, GradedIdeal, MonomialFloor, line_power, second_line_power
from app.models import IdealFile
from app.polynomials import LINE_SWAP, HomogeneousPolynomial, from_terms, monomial

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def load_ideal_file(path: PathLike) -> IdealFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise MalformedIdealFileError(f"Cannot read {path}: {e}") from e
    try:
        return IdealFile.model_validate_json(text)
    except ValidationError as e:
        raise MalformedIdealFileError(f"{path} is not a valid ideal file: {e}") from e


def _contains_floor(ideal: GradedIdeal, floor: MonomialFloor) -> bool:
    return all(ideal.contains_form(monomial(ideal.field, m)) for m in floor.generators)


def detect_floor(ideal: GradedIdeal) -> Tuple[MonomialFloor, str]:
    """The largest coordinate-line floor contained in the ideal, with the support it implies"""
    limit = max((g.degree for g in ideal.generators), default=0)
    for k in range(1, limit + 1):
        if _contains_floor(ideal, line_power(k)):
            return line_power(k), ON_L
    for k in range(1, limit + 1):
        if _contains_floor(ideal, second_line_power(k)):
            return second_line_power(k), ON_M
    for total in range(2, 2 * limit + 1):
        for j in range(1, total):
            floor = line_power(j).product(second_line_power(total - j))
            if _contains_floor(ideal, floor):
                return floor, ON_BOTH
    return EMPTY_FLOOR, ""


def curve_from_generators(generators: List[HomogeneousPolynomial], field: Field, label: str = "imported",
                          window: Optional[int] = None, seed: Optional[int] = None) -> MultiLineCurve:
    """Saturate an ideal given by generators and analyse it when it lives on a coordinate line.

    Curves on z = w = 0 are analysed on x = y = 0 and moved back.
    """
    raw = GradedIdeal(generators, field, label=label)
    floor, support = detect_floor(raw)
    if support == ON_M:
        generators = [g.permute(LINE_SWAP) for g in generators]
        floor = floor.permute(LINE_SWAP)
    top = window or default_window(max((g.degree for g in generators), default=1))
    ideal = GradedIdeal(generators, field, floor=floor, label=label).saturate(top)
    provenance = {"recipe": "import", "seed": seed}
    if not support:
        logger.warning(f"{label} is not supported on a coordinate line; invariant analysis skipped")
    single = support in (ON_L, ON_M)
    curve = make_curve(ideal, ON_L if single else support or "other", top, label, provenance=provenance)
    if single and curve.degree >= 2:
        try:
            curve.filtration = cm_filtration(curve)
            curve.qp_type = extract_type(curve, curve.filtration)
        except AtlasError as e:
            logger.warning(f"{label}: {e}")
    if support == ON_M:
        curve = on_second_line(curve)
        curve.label = label
    return curve


def import_ideal(path: PathLike, window: Optional[int] = None) -> MultiLineCurve:
    """Curve of an ideal file; `window` takes precedence over the window stored in the file"""
    data = load_ideal_file(path)
    field = get_field(data.field_char)
    generators = [from_terms(field, terms) for terms in data.generators]
    if not any(not g.is_zero() for g in generators):
        raise MalformedIdealFileError(f"{path} lists no nonzero generator")
    logger.info(f"Imported {len(generators)} generators from {path}")
    return curve_from_generators(generators, field, label=data.label or Path(path).stem,
                                 window=window or data.window, seed=data.seed)


def to_ideal_file(curve: MultiLineCurve) -> IdealFile:
    """Canonical generators of the curve's ideal in the exchange format"""
    field = curve.field
    generators = [
        [(list(m), field.to_json(c)) for m, c in g.terms.items()]
        for g in curve.ideal.canonical_generators()
    ]
    return IdealFile(field_char=field.characteristic, generators=generators, label=curve.label,
                     window=curve.window, seed=curve.seed)


def export_ideal(curve: MultiLineCurve, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_ideal_file(curve).model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"Exported {curve.label} to {path}")
    return path
