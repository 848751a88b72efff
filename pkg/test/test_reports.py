"""Text and JSON report rendering."""

import json

from app.invariants import describe
from app.models import Check, ReportBundle, ScenarioResult
from app.reports import default_report_path, render_json, render_text, write_reports


def bundle(scenarios, curves=()):
    return ReportBundle(command="verify-paper", field_char=32003, seed=7,
                        passed=all(s.passed for s in scenarios), scenarios=list(scenarios), curves=list(curves))


def result(name, passed=True):
    check = Check(name="g", expected=-3, actual=-3 if passed else -2, passed=passed)
    return ScenarioResult(name=name, seed=7, field_char=32003, passed=passed, checks=[check])


def test_scenarios_are_merged_by_name():
    one = bundle([result("zeta"), result("alpha")])
    other = bundle([result("alpha"), result("zeta")])
    assert render_text(one) == render_text(other)
    assert render_json(one) == render_json(other)
    names = [s["name"] for s in json.loads(render_json(one))["scenarios"]]
    assert names == ["alpha", "zeta"]


def test_text_report_marks_failures():
    text = render_text(bundle([result("alpha"), result("beta", passed=False)]))
    assert text.startswith("verify-paper: FAIL (char 32003, seed 7)")
    assert "== beta: FAIL" in text
    assert "[FAILED] g: expected -3, got -2" in text


def test_curve_blocks(doubles):
    text = render_text(bundle([], [describe(doubles[1])]))
    assert "double(1) [L]" in text
    assert "degree 2, genus -2, s(C) = 2" in text
    assert "type (1)" in text
    assert "condition (2,1): yes" in text


def test_write_reports_creates_siblings(tmp_path):
    data = bundle([result("alpha")])
    json_path, text_path = write_reports(data, tmp_path / "out" / "run.json")
    assert text_path == tmp_path / "out" / "run.txt"
    assert json.loads(json_path.read_text(encoding="utf-8"))["passed"] is True
    assert text_path.read_text(encoding="utf-8") == render_text(data)


def test_default_report_path(tmp_path):
    assert default_report_path("experiment", str(tmp_path)) == tmp_path / "experiment.json"
