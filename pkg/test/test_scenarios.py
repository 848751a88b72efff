"""Registered scenarios and randomized experiments."""

import pytest

from app.errors import UnknownScenarioError
from app.models import Check, ExperimentFamily
from app.scenarios import SCENARIOS, ScenarioRunner, random_experiment, run_scenario

from conftest import SEED

EXPECTED = {
    "formula-anchors", "thm-main1-d3", "thm-main1-d4", "thm-main2-d4-members", "thm-main2-d5-members",
    "beta-matrix", "splitting-anchors", "numerology", "oracle-corpus",
}


def test_registry():
    assert EXPECTED <= set(SCENARIOS)


def test_unknown_scenario(runner):
    with pytest.raises(UnknownScenarioError):
        runner.run_scenario("no-such-scenario")
    with pytest.raises(UnknownScenarioError):
        runner.run_all(["formula-anchors", "no-such-scenario"])


@pytest.mark.parametrize("name", ["formula-anchors", "numerology", "beta-matrix"])
def test_cheap_scenarios_pass(runner, name):
    result = runner.run_scenario(name)
    assert result.passed, [c for c in result.checks if not c.passed] or result.error
    assert result.seed == SEED and result.field_char == 32003


def test_triple_classification(runner):
    result = runner.run_scenario("thm-main1-d3")
    assert result.passed, [c for c in result.checks if not c.passed] or result.error
    assert any(r.is_cdl for r in result.reports)


def test_quadruple_classification(runner):
    result = runner.run_scenario("thm-main1-d4")
    assert result.passed, [c for c in result.checks if not c.passed] or result.error


def test_degree_four_members(runner):
    result = runner.run_scenario("thm-main2-d4-members")
    assert result.passed, [c for c in result.checks if not c.passed] or result.error
    assert len(result.reports) == 3


def test_checks_keep_lists_of_type_names():
    check = Check(name="admissible (3, 0)", expected=["(0; 1)"], actual=["(0; 1)"], passed=True)
    assert check.actual == ["(0; 1)"]
    result = run_scenario("numerology", SEED)
    assert result.passed, [c for c in result.checks if not c.passed] or result.error
    assert result.checks[0].expected == ["(0; 1)"]


def test_concurrent_runs_match_sequential():
    names = ["numerology", "formula-anchors"]
    sequential = ScenarioRunner(SEED, 32003).run_all(names, workers=1)
    concurrent = ScenarioRunner(SEED, 32003).run_all(names, workers=2)
    assert [r.name for r in sequential] == ["formula-anchors", "numerology"]
    assert [r.model_dump() for r in sequential] == [r.model_dump() for r in concurrent]


def test_failures_become_results(monkeypatch):
    def wrong(ctx):
        ctx.check("one is two", 1, 2)

    def broken(ctx):
        raise RuntimeError("boom")

    monkeypatch.setitem(SCENARIOS, "wrong", wrong)
    monkeypatch.setitem(SCENARIOS, "broken", broken)
    assert not run_scenario("wrong", SEED).passed
    result = run_scenario("broken", SEED)
    assert not result.passed
    assert result.error == "RuntimeError: boom"


def test_triple_experiment_always_succeeds():
    report = random_experiment(ExperimentFamily.TRIPLE_L1, trials=3, seed=SEED, ell=0, field_char=32003)
    assert (report.successes, report.construction_failures, report.trials) == (3, 0, 3)
    assert report.good_instance_passed is True


def test_experiments_are_deterministic():
    first = random_experiment(ExperimentFamily.TRIPLE_L1, trials=2, seed=11, ell=1)
    second = random_experiment(ExperimentFamily.TRIPLE_L1, trials=2, seed=11, ell=1)
    assert first == second


@pytest.mark.slow
def test_degree_five_members(runner):
    result = runner.run_scenario("thm-main2-d5-members")
    assert result.passed, [c for c in result.checks if not c.passed] or result.error
    assert len(result.reports) == 3
    assert all(r.s_value == 5 for r in result.reports)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["splitting-anchors", "oracle-corpus"])
def test_corpus_scenarios_pass(runner, name):
    result = runner.run_scenario(name)
    assert result.passed, [c for c in result.checks if not c.passed] or result.error
    assert result.checks


@pytest.mark.slow
def test_quadruple_experiment_over_l22():
    report = random_experiment(ExperimentFamily.QUADRUPLE_L22, trials=1, seed=SEED, ell=0, field_char=32003)
    assert (report.successes, report.construction_failures) == (1, 0)
    assert report.good_instance_passed is True


@pytest.mark.slow
def test_quadruples_over_l1_triples_never_qualify():
    report = random_experiment(ExperimentFamily.QUADRUPLE_OVER_L1, trials=2, seed=SEED, ell=0, field_char=32003)
    assert (report.successes, report.construction_failures) == (0, 0)
    assert report.good_instance_passed is None


@pytest.mark.slow
def test_general_quintuples_avoid_quartics():
    report = random_experiment(ExperimentFamily.PRIMITIVE_QUINTUPLE_A1, trials=1, seed=SEED, field_char=32003)
    assert (report.successes, report.construction_failures) == (1, 0)
