from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union
import enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Recipe(str, enum.Enum):
    LINE = "line"
    NEIGHBORHOOD = "neighborhood"
    DOUBLE = "double"
    TRIPLE = "triple"
    QUADRUPLE = "quadruple"
    PRIMITIVE = "primitive"
    CDL = "cdl"
    CDL_UNION = "cdl-union"


class ExperimentFamily(str, enum.Enum):
    TRIPLE_L1 = "triple-l1"
    QUADRUPLE_L22 = "quadruple-l22"
    QUADRUPLE_OVER_L1 = "quadruple-over-l1"
    PRIMITIVE_QUINTUPLE_A1 = "primitive-quintuple-a1"


class FamilyKind(str, enum.Enum):
    LINE = "line"
    PRIMITIVE = "primitive"
    TRIPLE = "triple"
    QUADRUPLE = "quadruple"
    TAIL = "tail"            # (d; a; 0, ..., 0, b)
    TAIL_PAIR = "tail-pair"  # (d; a; 0, ..., 0, b, c)
    UNION = "union"


class QPType(BaseModel):
    """Quasiprimitive type (a; b_2, ..., b_{d-1})"""

    model_config = ConfigDict(frozen=True)

    a: int = Field(ge=-1)
    b: Tuple[int, ...] = ()

    @field_validator("b")
    @classmethod
    def _non_negative(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(v < 0 for v in value):
            raise ValueError(f"b entries must be non-negative, got {value}")
        return value

    @model_validator(mode="after")
    def _superadditive(self) -> "QPType":
        if not self.is_superadditive():
            raise ValueError(f"type {self} violates b_i + b_j <= b_(i+j)")
        return self

    @property
    def degree(self) -> int:
        return len(self.b) + 2

    def b_value(self, j: int) -> int:
        return 0 if j == 1 else self.b[j - 2]

    def twist(self, j: int) -> int:
        """Twist of the j-th filtration quotient, j*a + b_j"""
        return j * self.a + self.b_value(j)

    def is_superadditive(self) -> bool:
        top = self.degree - 1
        return all(
            self.b_value(i) + self.b_value(j) <= self.b_value(i + j)
            for i in range(1, top + 1) for j in range(i, top + 1) if i + j <= top
        )

    def is_primitive(self) -> bool:
        return all(v == 0 for v in self.b)

    def genus(self) -> int:
        """Arithmetic genus of a quasiprimitive line of this type"""
        d = self.degree
        return -(d - 1) - self.a * d * (d - 1) // 2 - sum(self.b)

    def __str__(self) -> str:
        if not self.b:
            return f"({self.a})"
        return f"({self.a}; {', '.join(str(v) for v in self.b)})"


class SplittingType(BaseModel):
    """Twists {-e_1, ..., -e_r} of a direct sum of line bundles on the line"""

    twists: Tuple[int, ...]
    free_certificate: bool = True
    window: Tuple[int, int]
    modulo_torsion: bool = False

    @field_validator("twists")
    @classmethod
    def _sorted(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(sorted(value, reverse=True))

    @property
    def rank(self) -> int:
        return len(self.twists)

    @property
    def degree(self) -> int:
        return sum(self.twists)

    def matches(self, expected: List[int]) -> bool:
        return self.twists == tuple(sorted(expected, reverse=True))


class Certification(BaseModel):
    field_char: int
    seed: Optional[int] = None
    window: Tuple[int, int]
    stabilization_degrees: int
    attempts: List[int] = Field(default_factory=list)


class CurveReport(BaseModel):
    label: str
    support: str
    degree: int
    genus: int
    s_value: int
    splitting: Optional[SplittingType] = None
    qp_type: Optional[QPType] = None
    quasiprimitive: Optional[bool] = None
    hilbert_function: List[int] = Field(default_factory=list)
    condition_flags: Dict[str, bool] = Field(default_factory=dict)
    ell: Optional[int] = None
    cdl_flags: Dict[str, bool] = Field(default_factory=dict)
    is_cdl: Optional[bool] = None
    certification: Certification
    notes: List[str] = Field(default_factory=list)


CheckValue = Union[bool, int, str, List[int], List[str], None]


class Check(BaseModel):
    name: str
    expected: CheckValue
    actual: CheckValue
    passed: bool


class ScenarioResult(BaseModel):
    name: str
    seed: int
    field_char: int
    passed: bool
    checks: List[Check] = Field(default_factory=list)
    reports: List[CurveReport] = Field(default_factory=list)
    error: Optional[str] = None


class ExperimentReport(BaseModel):
    family: ExperimentFamily
    ell: int
    trials: int
    seed: int
    field_char: int
    successes: int
    construction_failures: int
    good_instance_passed: Optional[bool] = None
    notes: List[str] = Field(default_factory=list)


Coefficient = Union[int, str]


def _reduce(value: Coefficient, p: int) -> int:
    q = Fraction(value)
    return q.numerator * pow(q.denominator, p - 2, p) % p


Term = Tuple[Tuple[int, int, int, int], Coefficient]


class IdealFile(BaseModel):
    """UTF-8 JSON exchange format for homogeneous ideals"""

    field_char: int = Field(ge=0)
    variables: List[str] = Field(default_factory=lambda: ["x", "y", "z", "w"])
    generators: List[List[Term]]
    label: Optional[str] = None
    window: Optional[int] = None
    seed: Optional[int] = None

    @field_validator("variables")
    @classmethod
    def _four_variables(cls, value: List[str]) -> List[str]:
        if len(value) != 4:
            raise ValueError(f"expected four variable names, got {value}")
        return value

    @model_validator(mode="after")
    def _homogeneous_and_reduced(self) -> "IdealFile":
        reduced = []
        for index, terms in enumerate(self.generators):
            degrees = {sum(exps) for exps, _ in terms}
            if len(degrees) > 1:
                raise ValueError(f"generator {index} is not homogeneous (degrees {sorted(degrees)})")
            if any(min(exps) < 0 for exps, _ in terms):
                raise ValueError(f"generator {index} has a negative exponent")
            if self.field_char:
                terms = [(exps, _reduce(c, self.field_char)) for exps, c in terms]
            reduced.append(terms)
        self.generators = reduced
        return self


class FamilySpec(BaseModel):
    """Input to the closed-form family dimensions"""

    kind: FamilyKind
    d: Optional[int] = None
    a: Optional[int] = None
    b: Optional[int] = None
    c: Optional[int] = None
    parts: List["FamilySpec"] = Field(default_factory=list)


FamilySpec.model_rebuild()


class FamilyMember(BaseModel):
    """One family of curves of degree d reaching the maximal genus B(d, d)"""

    name: str
    spec: FamilySpec
    dimension: int
    parts: List[Tuple[int, int]] = Field(default_factory=list)  # (k, l) of each C_{k,l} in a union


class ReportBundle(BaseModel):
    """Everything one CLI invocation reports, in a fixed order"""

    command: str
    field_char: int
    seed: int
    passed: bool
    scenarios: List[ScenarioResult] = Field(default_factory=list)
    curves: List[CurveReport] = Field(default_factory=list)
    experiments: List[ExperimentReport] = Field(default_factory=list)
    families: List[FamilyMember] = Field(default_factory=list)
