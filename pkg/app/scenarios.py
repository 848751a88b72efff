"""Registered scenarios re-checking the classification, and randomized experiments."""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.errors import AtlasError, UnknownScenarioError, VerificationError
from app.factory import (
    ON_L,
    MultiLineCurve,
    beta_identity,
    beta_matrix,
    cdl_curve,
    conormal_restriction,
    disjoint_union,
    double_line,
    extract_type,
    good_triple_data,
    line,
    line_times,
    make_curve,
    neighborhood,
    on_second_line,
    primitive_line,
    quadruple_ideal_j,
    quadruple_line,
    random_triple_data,
    triple_from_data,
)
from app.field import Field, get_field
from app.graded import GradedIdeal
from app.invariants import (
    admissible_types,
    beorchia_bound,
    cdl_genus,
    check_condition,
    describe,
    family_dimension,
    genus_from_splitting,
    is_cdl,
    maximum_genus_families,
    min_surface_degree,
    numerology_discrepancies,
    qp_genus,
)
from app.line_modules import image_module, module_of, splitting_type
from app.models import (
    Check,
    CheckValue,
    CurveReport,
    ExperimentFamily,
    ExperimentReport,
    FamilyKind,
    FamilyMember,
    FamilySpec,
    QPType,
    ScenarioResult,
)
from app.polynomials import constant

logger = logging.getLogger(__name__)


class ScenarioContext:
    """Collects the checks and curve reports of one scenario run"""

    def __init__(self, name: str, seed: int, field: Field, runner: "ScenarioRunner"):
        self.name = name
        self.seed = seed
        self.field = field
        self.runner = runner
        self.checks: List[Check] = []
        self.reports: List[CurveReport] = []

    def check(self, name: str, expected: CheckValue, actual: CheckValue) -> bool:
        passed = expected == actual
        self.checks.append(Check(name=name, expected=expected, actual=actual, passed=passed))
        if not passed:
            logger.warning(f"{self.name}: {name} expected {expected}, got {actual}")
        return passed

    def report(self, report: CurveReport) -> CurveReport:
        self.reports.append(report)
        return report


ScenarioFn = Callable[[ScenarioContext], None]
SCENARIOS: Dict[str, ScenarioFn] = {}


def scenario(name: str) -> Callable[[ScenarioFn], ScenarioFn]:
    def register(fn: ScenarioFn) -> ScenarioFn:
        SCENARIOS[name] = fn
        return fn
    return register


def twists_of(splitting) -> List[int]:
    return list(splitting.twists) if splitting is not None else []


# -- curve builders shared by scenarios ----------------------------------------

class ScenarioRunner:
    """Runs registered scenarios for one (seed, characteristic) pair, sharing constructed curves"""

    def __init__(self, seed: Optional[int] = None, field_char: Optional[int] = None):
        self.seed = settings.DEFAULT_SEED if seed is None else seed
        self.field_char = settings.FIELD_CHAR if field_char is None else field_char
        self.field = get_field(self.field_char)
        self._curves: Dict[Tuple, MultiLineCurve] = {}
        self._locks: Dict[Tuple, threading.Lock] = {}
        self._guard = threading.Lock()

    def curve(self, key: Tuple, build: Callable[[], MultiLineCurve]) -> MultiLineCurve:
        """Build once per runner; concurrent scenarios wait for the first builder"""
        with self._guard:
            lock = self._locks.setdefault(key, threading.Lock())
        with lock:
            if key not in self._curves:
                self._curves[key] = build()
            return self._curves[key]

    def double(self, a: int) -> MultiLineCurve:
        data = good_triple_data(a, 0, self.field)
        return self.curve(("double", a), lambda: double_line(a, data.f, data.g))

    def triple(self, a: int, b: int) -> MultiLineCurve:
        return self.curve(("triple", a, b), lambda: triple_from_data(good_triple_data(a, b, self.field)))

    def quadruple(self, a: int, b: int = 2) -> MultiLineCurve:
        return self.curve(("quadruple", a, b),
                          lambda: quadruple_line(good_triple_data(a, b, self.field), seed=self.seed))

    def primitive(self, d: int, a: int) -> MultiLineCurve:
        return self.curve(("primitive", d, a), lambda: primitive_line(d, a, seed=self.seed, field=self.field))

    def cdl(self, d: int, ell: int) -> MultiLineCurve:
        if d == 2:
            return self.double(ell)
        if d == 3:
            return self.triple(ell, 1)
        if d == 4:
            return self.quadruple(ell)
        return self.curve(("cdl", d, ell), lambda: cdl_curve(d, ell, seed=self.seed, field=self.field))

    def cdl_union(self, first: Tuple[int, int], second: Tuple[int, int]) -> MultiLineCurve:
        def build() -> MultiLineCurve:
            return disjoint_union(self.cdl(*first), on_second_line(self.cdl(*second)))
        return self.curve(("union", first, second), build)

    def member(self, member: FamilyMember) -> MultiLineCurve:
        if member.spec.kind == FamilyKind.PRIMITIVE:
            d, a = member.spec.d, member.spec.a
            return self.curve(("primitive member", d, a),
                              lambda: primitive_line(d, a, seed=self.seed, field=self.field, min_surface=d))
        if member.spec.kind == FamilyKind.UNION:
            return self.cdl_union(*member.parts)
        return self.cdl(*member.parts[0])

    # -- running ----------------------------------------------------------

    def run_scenario(self, name: str) -> ScenarioResult:
        fn = SCENARIOS.get(name)
        if fn is None:
            raise UnknownScenarioError(f"Unknown scenario '{name}'; registered: {', '.join(sorted(SCENARIOS))}")
        ctx = ScenarioContext(name, self.seed, self.field, self)
        logger.info(f"Running scenario {name} (seed {self.seed}, char {self.field_char})")
        try:
            fn(ctx)
            error = None
        except Exception as e:
            logger.error(f"Error in scenario {name}: {e}")
            error = f"{type(e).__name__}: {e}"
        passed = error is None and all(c.passed for c in ctx.checks)
        logger.info(f"Scenario {name}: {'PASS' if passed else 'FAIL'}")
        return ScenarioResult(name=name, seed=self.seed, field_char=self.field_char, passed=passed,
                              checks=ctx.checks, reports=ctx.reports, error=error)

    def run_all(self, names: Optional[Sequence[str]] = None, workers: Optional[int] = None) -> List[ScenarioResult]:
        """Run scenarios, concurrently when workers > 1; results come back sorted by name"""
        names = list(names or SCENARIOS)
        for name in names:
            if name not in SCENARIOS:
                raise UnknownScenarioError(f"Unknown scenario '{name}'")
        workers = workers or settings.SCENARIO_WORKERS
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(self.run_scenario, names))
        else:
            results = [self.run_scenario(name) for name in names]
        return sorted(results, key=lambda r: r.name)


def run_scenario(name: str, seed: Optional[int] = None, field_char: Optional[int] = None) -> ScenarioResult:
    return ScenarioRunner(seed, field_char).run_scenario(name)


# -- scenarios -------------------------------------------------------------------

@scenario("formula-anchors")
def formula_anchors(ctx: ScenarioContext) -> None:
    for (d, s), value in {(2, 2): -1, (3, 3): -3, (4, 4): -7, (5, 5): -14, (7, 3): 6}.items():
        ctx.check(f"B({d},{s})", value, beorchia_bound(d, s))
    for (d, ell), value in {(1, 0): 0, (1, 3): 0, (4, 0): -7, (3, 1): -6, (4, 1): -13}.items():
        ctx.check(f"g(C_({d},{ell}))", value, cdl_genus(d, ell))
    ctx.check("g(line) + g(C_(3,1)) - 1", beorchia_bound(4, 4), cdl_genus(1, 3) + cdl_genus(3, 1) - 1)
    ctx.check("g(line) + g(C_(4,1)) - 1", beorchia_bound(5, 5), cdl_genus(1, 4) + cdl_genus(4, 1) - 1)
    ctx.check("g(C_(3,2)) + g(C_(2,3)) - 1", beorchia_bound(5, 5), cdl_genus(3, 2) + cdl_genus(2, 3) - 1)
    for a in range(4):
        ctx.check(f"genus of a double line of type {a}", -a - 1, qp_genus(QPType(a=a), 2))
        ctx.check(f"dim P(2;{a})", 2 * a + 7,
                  family_dimension(FamilySpec(kind=FamilyKind.PRIMITIVE, d=2, a=a)))
    ctx.check("genus of type (0; 1)", -3, qp_genus(QPType(a=0, b=(1,)), 3))
    ctx.check("genus of type (1; 0, 0, 0)", -14, qp_genus(QPType(a=1, b=(0, 0, 0)), 5))
    for ell in range(4):
        ctx.check(f"dim triple ({ell}; 1)", 5 * ell + 12,
                  family_dimension(FamilySpec(kind=FamilyKind.TRIPLE, a=ell, b=1)))
        ctx.check(f"dim quadruple ({ell}; 2, 2)", 9 * ell + 21,
                  family_dimension(FamilySpec(kind=FamilyKind.QUADRUPLE, a=ell, b=2, c=2)))
    expected_dims = {2: [7, 8], 3: [12, 13], 4: [21, 21, 22], 5: [30, 34, 35]}
    for d, dims in expected_dims.items():
        ctx.check(f"maximum-genus family dimensions, d = {d}", dims,
                  sorted(m.dimension for m in maximum_genus_families(d)))


@scenario("thm-main1-d3")
def triple_classification(ctx: ScenarioContext) -> None:
    runner = ctx.runner
    for ell in range(3):
        good = runner.triple(ell, 1)
        report = ctx.report(is_cdl(good, 3, ell))
        ctx.check(f"type of triple ({ell}; 1)", str(QPType(a=ell, b=(1,))), str(extract_type(good)))
        ctx.check(f"triple ({ell}; 1) is C_(3,{ell})", True, report.is_cdl)
        ctx.check(f"triple ({ell}; 1) criteria", [1, 1, 1], [int(v) for _, v in sorted(report.cdl_flags.items())])
        ctx.check(f"triple ({ell}; 1) genus", cdl_genus(3, ell), good.genus)

        steep = runner.triple(ell, 2)
        report = ctx.report(is_cdl(steep, 3, ell))
        ctx.check(f"triple ({ell}; 2) satisfies the condition at l = {ell}", True, check_condition(steep, 3, ell))
        ctx.check(f"triple ({ell}; 2) is C_(3,{ell})", False, report.is_cdl)

        primitive = runner.primitive(3, ell + 1)
        report = ctx.report(is_cdl(primitive, 3, ell))
        ctx.check(f"primitive triple of type {ell + 1} is C_(3,{ell})", False, report.is_cdl)
        ctx.check(f"dim triple ({ell}; 1)", 5 * ell + 12,
                  family_dimension(FamilySpec(kind=FamilyKind.TRIPLE, a=ell, b=1)))
    ctx.check("triple (0; 1) lies on no quadric", 3, min_surface_degree(runner.triple(0, 1)))


@scenario("thm-main1-d4")
def quadruple_classification(ctx: ScenarioContext) -> None:
    runner = ctx.runner
    for ell in range(2):
        curve = runner.quadruple(ell)
        report = ctx.report(is_cdl(curve, 4, ell))
        ctx.check(f"good quadruple ({ell}; 2, 2) is C_(4,{ell})", True, report.is_cdl)
        ctx.check(f"good quadruple ({ell}; 2, 2) type", str(QPType(a=ell, b=(2, 2))), str(curve.qp_type))
        ctx.check(f"good quadruple ({ell}; 2, 2) splitting", [-(4 + ell)] * 6, twists_of(report.splitting))
        ctx.check(f"good quadruple ({ell}; 2, 2) genus", -7 - 6 * ell, curve.genus)
        ctx.check(f"dim quadruple ({ell}; 2, 2)", 9 * ell + 21,
                  family_dimension(FamilySpec(kind=FamilyKind.QUADRUPLE, a=ell, b=2, c=2)))
        over = runner.quadruple(ell, 1)
        ctx.report(describe(over))
        ctx.check(f"quadruple over triple ({ell}; 1) satisfies the condition", False, check_condition(over, 4, ell))
    ctx.check("good quadruple (0; 2, 2) lies on no cubic", 4, min_surface_degree(runner.quadruple(0)))


def _check_members(ctx: ScenarioContext, d: int) -> None:
    bound = beorchia_bound(d, d)
    for member in maximum_genus_families(d):
        curve = ctx.runner.member(member)
        ctx.report(describe(curve))
        ctx.check(f"{member.name}: (degree, genus, s)", [d, bound, d],
                  [curve.degree, curve.genus, min_surface_degree(curve)])


@scenario("thm-main2-d4-members")
def degree_four_members(ctx: ScenarioContext) -> None:
    _check_members(ctx, 4)


@scenario("thm-main2-d5-members")
def degree_five_members(ctx: ScenarioContext) -> None:
    _check_members(ctx, 5)


@scenario("beta-matrix")
def beta_facts(ctx: ScenarioContext) -> None:
    rng = np.random.default_rng(ctx.seed)
    for a in range(2):
        data = random_triple_data(a, 2, rng, ctx.field)
        beta = beta_matrix(data)
        ctx.check(f"a = {a}: syzygy annihilated", True, all(v.is_zero() for v in beta.apply_syzygy()))
        ctx.check(f"a = {a}: generic rank", 5, beta.generic_rank(rng))
        start = 2 * a + data.b + 4
        ctx.check(f"a = {a}: kernel dimensions in degrees {start - 1}..{start + 2}", [0, 1, 2, 3],
                  [beta.kernel_dimension(n) for n in range(start - 1, start + 3)])
    failures = 0
    for _ in range(20):
        a = int(rng.integers(0, 3))
        if not beta_identity(random_triple_data(a, 2, rng, ctx.field)).is_zero():
            failures += 1
    ctx.check("identity p F^2 - g H1 + f H2 - r x^2 F - s x y F - t y^2 F = 0 on 20 draws", 0, failures)


@scenario("splitting-anchors")
def splitting_anchors(ctx: ScenarioContext) -> None:
    field, runner = ctx.field, ctx.runner
    unit = GradedIdeal([constant(field, 1)], field, label="S")
    for d in range(1, 6):
        module = image_module(unit, d, d + settings.WINDOW_MARGIN, label=f"O_(L_{d})")
        expected = [-i for i in range(d) for _ in range(i + 1)]
        ctx.check(f"O_(L_{d}) splitting", sorted(expected, reverse=True), twists_of(splitting_type(module)))
    rng = np.random.default_rng(ctx.seed)
    for a in range(3):
        data = random_triple_data(a, 2, rng, field)
        top = 4 + 2 * a + settings.WINDOW_MARGIN + 2
        triple = triple_from_data(data, top)
        double_ideal = triple.filtration[1]
        j_module = module_of(quadruple_ideal_j(data, top), 4, top, label="J/I_L^4")
        ctx.check(f"J module, a = {a}", [-(a + 4)] * 5, twists_of(splitting_type(j_module)))
        relations = module_of(line_times(double_ideal), 3, top, label="I_L I_C2 / I_L^3")
        ctx.check(f"I_L I_C2 / I_L^3, a = {a}", [-(3 + a)] * 2, twists_of(splitting_type(relations)))
        ctx.check(f"I_C3 / I_L^3, type ({a}; 2)", sorted([-3 - a, -3 - a, -4 - a], reverse=True),
                  twists_of(splitting_type(module_of(triple.ideal, 3, top))))
    ctx.check("conormal of L", [-1, -1], twists_of(conormal_restriction(line(field))))
    for a in range(3):
        ctx.check(f"conormal of a double line of type {a}", [2 * a, -a - 2],
                  twists_of(conormal_restriction(runner.double(a))))
    for a, b in ((0, 1), (1, 1), (0, 2)):
        ctx.check(f"conormal of triple ({a}; {b}) modulo torsion", [3 * a + b, -a - b - 2],
                  twists_of(conormal_restriction(runner.triple(a, b))))
    ctx.check("conormal of a primitive triple of type 1", [3, -3],
              twists_of(conormal_restriction(runner.primitive(3, 1))))


@scenario("numerology")
def numerology(ctx: ScenarioContext) -> None:
    for ell in range(4):
        ctx.check(f"admissible (3, {ell})", [str(QPType(a=ell, b=(1,)))],
                  [str(t) for t in admissible_types(3, ell)])
        ctx.check(f"admissible (4, {ell})",
                  [str(QPType(a=ell, b=b)) for b in ((0, 4), (1, 3), (2, 2))],
                  [str(t) for t in admissible_types(4, ell)])
        ctx.check(f"admissible (4, {ell}) filtered", [str(QPType(a=ell, b=(2, 2)))],
                  [str(t) for t in admissible_types(4, ell, apply_subcurve_filters=True)])
    filtered = admissible_types(5, 0, apply_subcurve_filters=True)
    for t in (QPType(a=1, b=(0, 0, 0)), QPType(a=0, b=(2, 2, 6)), QPType(a=0, b=(2, 3, 5))):
        ctx.check(f"{t} admissible at (5, 0)", True, t in filtered)
    ctx.check("flagged at (5, 0)", ["(0; 2, 4, 4)"], [str(t) for t in numerology_discrepancies(5, 0)])
    for s in range(1, 7):
        values = [beorchia_bound(d, s) for d in range(s, 2 * s + 4)]
        ctx.check(f"B(d, {s}) nondecreasing in d", True, all(u <= v for u, v in zip(values, values[1:])))


def corpus(runner: ScenarioRunner) -> List[Tuple[MultiLineCurve, Optional[QPType], List[Tuple[int, bool]]]]:
    """(curve, declared type, [(l, expected C_{d,l} answer), ...]) for the regression corpus"""
    field = runner.field
    rng = np.random.default_rng(runner.seed)
    entries = [(line(field), None, [(ell, True) for ell in range(4)])]
    for a in range(4):
        entries.append((runner.double(a), QPType(a=a), [(a, True), (a + 1, False)]))
    for ell in range(3):
        entries.append((runner.triple(ell, 1), QPType(a=ell, b=(1,)), [(ell, True)]))
    for ell in range(2):
        entries.append((runner.triple(ell, 2), QPType(a=ell, b=(2,)), [(ell, False)]))
    for k in range(2):
        curve = triple_from_data(random_triple_data(k, 1, rng, field))
        entries.append((curve, QPType(a=k, b=(1,)), [(k, True)]))
    for ell in range(2):
        entries.append((runner.quadruple(ell), QPType(a=ell, b=(2, 2)), [(ell, True)]))
    entries.append((runner.primitive(3, 1), QPType(a=1, b=(0,)), [(0, False), (1, False)]))
    entries.append((runner.primitive(4, 0), QPType(a=0, b=(0, 0)), [(0, False)]))
    entries.append((runner.primitive(5, 1), QPType(a=1, b=(0, 0, 0)), [(0, True)]))
    entries.append((neighborhood(2, field), None, [(0, False)]))
    entries.append((runner.cdl_union((1, 1), (1, 1)), None, []))
    entries.append((runner.cdl_union((1, 3), (3, 1)), None, []))
    return entries


@scenario("oracle-corpus")
def oracle_corpus(ctx: ScenarioContext) -> None:
    entries = corpus(ctx.runner)
    ctx.check("corpus size at least 20", True, len(entries) >= 20)
    for curve, declared, expectations in entries:
        name = curve.label
        report = ctx.report(describe(curve))
        ctx.check(f"{name}: s(C) <= deg C", True, report.s_value <= curve.degree)
        if curve.parts:
            first, second = curve.parts
            ctx.check(f"{name}: genus additivity", first.genus + second.genus - 1, curve.genus)
            continue
        if report.splitting is not None:
            ctx.check(f"{name}: genus from splitting", curve.genus,
                      genus_from_splitting(report.splitting.twists, curve.degree))
        if declared is not None:
            ctx.check(f"{name}: type round trip", str(declared), str(report.qp_type))
            ctx.check(f"{name}: genus from type", declared.genus(), curve.genus)
        for ell, expected in expectations:
            verdict = is_cdl(curve, curve.degree, ell)
            ctx.check(f"{name}: C_({curve.degree},{ell})", expected, verdict.is_cdl)
            if verdict.is_cdl and curve.degree >= 2 and report.qp_type is not None:
                ctx.check(f"{name}: type admissible at l = {ell}", True,
                          report.qp_type in admissible_types(curve.degree, ell, apply_subcurve_filters=True))
            if check_condition(curve, curve.degree, ell) and curve.filtration:
                for k, sub in enumerate(curve.filtration[:-1], start=1):
                    subcurve = make_curve(sub, ON_L, curve.window, f"{name}_C{k}")
                    ctx.check(f"{name}: C_{k} inherits the condition at l = {ell}", True,
                              check_condition(subcurve, k, ell))
        if report.s_value == curve.degree and curve.filtration:
            for k, sub in enumerate(curve.filtration[:-1], start=1):
                subcurve = make_curve(sub, ON_L, curve.window, f"{name}_C{k}")
                ctx.check(f"{name}: s(C_{k})", k, min_surface_degree(subcurve))


# -- randomized experiments ------------------------------------------------------

def random_experiment(family: ExperimentFamily, trials: Optional[int] = None, seed: Optional[int] = None,
                      ell: int = 0, field_char: Optional[int] = None) -> ExperimentReport:
    """Empirical success frequency of a property over random admissible parameters"""
    trials = settings.EXPERIMENT_TRIALS if trials is None else trials
    seed = settings.DEFAULT_SEED if seed is None else seed
    field_char = settings.FIELD_CHAR if field_char is None else field_char
    field = get_field(field_char)
    successes = failures = 0
    notes: List[str] = []
    good: Optional[bool] = None
    logger.info(f"Experiment {family.value}, l = {ell}: {trials} trials from seed {seed}")

    if family == ExperimentFamily.TRIPLE_L1:
        def trial(rng: np.random.Generator, trial_seed: int) -> bool:
            return bool(is_cdl(triple_from_data(random_triple_data(ell, 1, rng, field)), 3, ell).is_cdl)
        good = bool(is_cdl(triple_from_data(good_triple_data(ell, 1, field)), 3, ell).is_cdl)
    elif family == ExperimentFamily.QUADRUPLE_L22:
        def trial(rng: np.random.Generator, trial_seed: int) -> bool:
            curve = quadruple_line(random_triple_data(ell, 2, rng, field), seed=trial_seed)
            return bool(is_cdl(curve, 4, ell).is_cdl)
        good = bool(is_cdl(quadruple_line(good_triple_data(ell, 2, field), seed=seed), 4, ell).is_cdl)
    elif family == ExperimentFamily.QUADRUPLE_OVER_L1:
        notes.append(f"success means the quadruple satisfies the condition at (4, {ell})")

        def trial(rng: np.random.Generator, trial_seed: int) -> bool:
            curve = quadruple_line(random_triple_data(ell, 1, rng, field), seed=trial_seed)
            return check_condition(curve, 4, ell)
    else:
        notes.append("success means s(C) = 5 for a primitive quintuple line of type 1")

        def trial(rng: np.random.Generator, trial_seed: int) -> bool:
            return min_surface_degree(primitive_line(5, 1, seed=trial_seed, field=field)) == 5

    for k in range(trials):
        trial_seed = seed + 1000 * (k + 1)
        try:
            if trial(np.random.default_rng(trial_seed), trial_seed):
                successes += 1
        except (VerificationError, AtlasError) as e:
            failures += 1
            logger.warning(f"Trial {k} (seed {trial_seed}) of {family.value} could not be built: {e}")
    notes.append(f"empirical frequency over characteristic {field_char}; not a statement about general members")
    return ExperimentReport(family=family, ell=ell, trials=trials, seed=seed, field_char=field_char,
                            successes=successes, construction_failures=failures,
                            good_instance_passed=good, notes=notes)
