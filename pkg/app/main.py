"""Command-line front end: construct, invariants, check, verify-paper, experiment."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.errors import MalformedIdealFileError, UnknownScenarioError
from app.factory import (
    MultiLineCurve,
    cdl_curve,
    disjoint_union,
    double_line,
    good_triple_data,
    line,
    neighborhood,
    on_second_line,
    primitive_line,
    quadruple_line,
    random_triple_data,
    triple_from_data,
)
from app.field import Field, get_field
from app.ideal_files import export_ideal, import_ideal, to_ideal_file
from app.invariants import check_condition, describe, is_cdl, maximum_genus_families
from app.models import CurveReport, ExperimentFamily, Recipe, ReportBundle
from app.reports import default_report_path, render_text, write_reports
from app.scenarios import SCENARIOS, ScenarioRunner, random_experiment

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILURE, EXIT_USAGE = 0, 1, 2

FAMILY_DEGREES = range(2, 6)


def _parts(value: str) -> List[Tuple[int, int]]:
    """Parse 'k1,l1:k2,l2' into the two (degree, l) pairs of a union"""
    try:
        pairs = [tuple(int(v) for v in chunk.split(",")) for chunk in value.split(":")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'k1,l1:k2,l2', got {value!r}")
    if len(pairs) != 2 or any(len(p) != 2 for p in pairs):
        raise argparse.ArgumentTypeError(f"expected 'k1,l1:k2,l2', got {value!r}")
    return pairs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atlas",
        description="Exact invariants of multiple lines in projective 3-space over a prime field",
    )
    parser.add_argument("--char", type=int, default=None, help=f"field characteristic (default {settings.FIELD_CHAR}; 0 for rationals)")
    parser.add_argument("--seed", type=int, default=None, help=f"random seed (default {settings.DEFAULT_SEED})")
    parser.add_argument("--window", type=int, default=None, help="top degree of every computation window")
    parser.add_argument("--json", type=Path, default=None, help="write a JSON report here and a .txt sibling")
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser("construct", help="emit an ideal file for a named recipe")
    construct.add_argument("recipe", type=Recipe, choices=list(Recipe), metavar="RECIPE",
                           help=f"one of: {', '.join(r.value for r in Recipe)}")
    construct.add_argument("--d", type=int, default=None, help="degree (neighborhood, primitive, cdl)")
    construct.add_argument("--a", type=int, default=0)
    construct.add_argument("--b", type=int, default=None)
    construct.add_argument("--ell", type=int, default=0)
    construct.add_argument("--parts", type=_parts, default=None, help="cdl-union members as 'k1,l1:k2,l2'")
    construct.add_argument("--random", action="store_true", help="draw random admissible forms from the seed")
    construct.add_argument("--out", type=Path, default=None, help="ideal file to write (default: stdout)")

    invariants = commands.add_parser("invariants", help="report every invariant of an ideal file")
    invariants.add_argument("file", type=Path)

    check = commands.add_parser("check", help="decide the condition and the C_(d,l) predicate")
    check.add_argument("file", type=Path)
    check.add_argument("--d", type=int, default=None, help="expected degree (default: the curve's)")
    check.add_argument("--ell", type=int, action="append", default=None, help="repeatable; default 0")
    check.add_argument("--condition-only", action="store_true", help="only evaluate the condition")

    verify = commands.add_parser("verify-paper", help="run the registered classification scenarios")
    verify.add_argument("--scenario", action="append", default=None, choices=sorted(SCENARIOS))
    verify.add_argument("--workers", type=int, default=None)

    experiment = commands.add_parser("experiment", help="randomized sweep over a family")
    experiment.add_argument("--family", type=ExperimentFamily, choices=list(ExperimentFamily), required=True,
                            metavar="FAMILY", help=f"one of: {', '.join(f.value for f in ExperimentFamily)}")
    experiment.add_argument("--ell", type=int, default=0)
    experiment.add_argument("--trials", type=int, default=None)
    return parser


# -- commands ----------------------------------------------------------------

def construct_curve(recipe: Recipe, field: Field, seed: int, window: Optional[int] = None,
                    d: Optional[int] = None, a: int = 0, b: Optional[int] = None, ell: int = 0,
                    parts: Optional[Sequence[Tuple[int, int]]] = None, random: bool = False) -> MultiLineCurve:
    """Build the curve a recipe names"""
    def data(b_value: int):
        if random:
            return random_triple_data(a, b_value, np.random.default_rng(seed), field)
        return good_triple_data(a, b_value, field)

    if recipe == Recipe.LINE:
        return line(field, window)
    if recipe == Recipe.NEIGHBORHOOD:
        return neighborhood(d or 2, field, window)
    if recipe == Recipe.DOUBLE:
        forms = data(0)
        return double_line(a, forms.f, forms.g, window)
    if recipe == Recipe.TRIPLE:
        return triple_from_data(data(1 if b is None else b), window)
    if recipe == Recipe.QUADRUPLE:
        return quadruple_line(data(2 if b is None else b), seed=seed, window=window)
    if recipe == Recipe.PRIMITIVE:
        return primitive_line(d or 3, a, seed=seed, field=field, window=window)
    if recipe == Recipe.CDL:
        return cdl_curve(d or 3, ell, seed=seed, field=field, window=window)
    if not parts:
        raise argparse.ArgumentTypeError("cdl-union needs --parts k1,l1:k2,l2")
    (k1, l1), (k2, l2) = parts
    first = cdl_curve(k1, l1, seed=seed, field=field, window=window)
    second = cdl_curve(k2, l2, seed=seed, field=field, window=window)
    return disjoint_union(first, on_second_line(second), window)


def _construct(args: argparse.Namespace, field: Field, seed: int) -> ReportBundle:
    curve = construct_curve(args.recipe, field, seed, args.window, d=args.d, a=args.a, b=args.b,
                            ell=args.ell, parts=args.parts, random=args.random)
    if args.out:
        export_ideal(curve, args.out)
    else:
        sys.stdout.write(to_ideal_file(curve).model_dump_json(indent=2) + "\n")
    return ReportBundle(command="construct", field_char=field.characteristic, seed=seed, passed=True,
                        curves=[describe(curve)])


def _load(args: argparse.Namespace) -> MultiLineCurve:
    curve = import_ideal(args.file, window=args.window)
    if args.char is not None and curve.field.characteristic != args.char:
        logger.warning(f"{args.file} is over characteristic {curve.field.characteristic}; --char {args.char} ignored")
    return curve


def _invariants(args: argparse.Namespace, field: Field, seed: int) -> ReportBundle:
    curve = _load(args)
    return ReportBundle(command="invariants", field_char=curve.field.characteristic, seed=seed, passed=True,
                        curves=[describe(curve)])


def _check(args: argparse.Namespace, field: Field, seed: int) -> ReportBundle:
    curve = _load(args)
    d = args.d or curve.degree
    reports: List[CurveReport] = []
    passed = True
    for ell in args.ell or [0]:
        if args.condition_only:
            report = describe(curve)
            holds = check_condition(curve, d, ell)
            report.condition_flags[f"{d},{ell}"] = holds
            report.ell = ell
        else:
            report = is_cdl(curve, d, ell)
            holds = bool(report.is_cdl)
        logger.info(f"{curve.label} at (d, l) = ({d}, {ell}): {'yes' if holds else 'no'}")
        passed = passed and holds
        reports.append(report)
    return ReportBundle(command="check", field_char=curve.field.characteristic, seed=seed, passed=passed,
                        curves=reports)


def _verify(args: argparse.Namespace, field: Field, seed: int) -> ReportBundle:
    runner = ScenarioRunner(seed, field.characteristic)
    results = runner.run_all(args.scenario, workers=args.workers)
    families = [member for d in FAMILY_DEGREES for member in maximum_genus_families(d)]
    return ReportBundle(command="verify-paper", field_char=field.characteristic, seed=seed,
                        passed=all(r.passed for r in results), scenarios=results, families=families)


def _experiment(args: argparse.Namespace, field: Field, seed: int) -> ReportBundle:
    report = random_experiment(args.family, trials=args.trials, seed=seed, ell=args.ell,
                               field_char=field.characteristic)
    passed = report.construction_failures == 0 and report.good_instance_passed is not False
    return ReportBundle(command="experiment", field_char=field.characteristic, seed=seed, passed=passed,
                        experiments=[report])


COMMANDS = {
    "construct": _construct,
    "invariants": _invariants,
    "check": _check,
    "verify-paper": _verify,
    "experiment": _experiment,
}

DEFAULT_REPORTS = {"verify-paper", "experiment"}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        field = get_field(settings.FIELD_CHAR if args.char is None else args.char)
    except ValueError as e:
        parser.error(str(e))
    seed = settings.DEFAULT_SEED if args.seed is None else args.seed

    configured_window = settings.WINDOW
    if args.window is not None:
        settings.WINDOW = args.window
    try:
        bundle = COMMANDS[args.command](args, field, seed)
    except (UnknownScenarioError, MalformedIdealFileError, argparse.ArgumentTypeError) as e:
        logger.error(f"Error in {args.command}: {e}")
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"Error in {args.command}: {e}")
        return EXIT_FAILURE
    finally:
        settings.WINDOW = configured_window

    json_path = args.json
    if json_path is None and args.command in DEFAULT_REPORTS:
        json_path = default_report_path(args.command)
    if json_path is not None:
        write_reports(bundle, json_path)
    if args.command != "construct" or args.out:
        sys.stdout.write(render_text(bundle))
    return EXIT_OK if bundle.passed else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
