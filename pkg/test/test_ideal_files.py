"""Ideal file import and export."""

import json

import pytest

from app.errors import MalformedIdealFileError
from app.factory import ON_L, ON_M
from app.ideal_files import detect_floor, export_ideal, import_ideal, load_ideal_file, to_ideal_file
from app.graded import GradedIdeal, line_power, second_line_power
from app.invariants import describe, min_surface_degree
from app.models import IdealFile, QPType
from app.polynomials import variables


def write(path, generators, field_char=32003, **extra):
    path.write_text(json.dumps({"field_char": field_char, "generators": generators, **extra}), encoding="utf-8")
    return path


def test_round_trip_preserves_the_report(tmp_path, triple01):
    path = export_ideal(triple01, tmp_path / "triple.json")
    imported = import_ideal(path)
    assert imported.ideal.same_as(triple01.ideal, triple01.window)
    assert describe(imported) == describe(triple01)
    assert to_ideal_file(imported).generators == to_ideal_file(triple01).generators


def test_hand_written_double_line(tmp_path):
    path = write(tmp_path / "c20.json", [
        [[[2, 0, 0, 0], 1]],
        [[[1, 1, 0, 0], 1]],
        [[[0, 2, 0, 0], 1]],
        [[[1, 0, 0, 1], 1], [[0, 1, 1, 0], -1]],
    ], label="C_(2,0)")
    curve = import_ideal(path)
    assert curve.label == "C_(2,0)"
    assert (curve.degree, curve.genus, curve.support) == (2, -1, ON_L)
    assert min_surface_degree(curve) == 2
    assert curve.qp_type == QPType(a=0)


def test_curve_on_the_second_line(tmp_path):
    path = write(tmp_path / "m.json", [
        [[[0, 0, 2, 0], 1]],
        [[[0, 0, 1, 1], 1]],
        [[[0, 0, 0, 2], 1]],
        [[[0, 1, 1, 0], 1], [[1, 0, 0, 1], -1]],
    ])
    curve = import_ideal(path)
    assert curve.support == ON_M
    assert (curve.degree, curve.genus) == (2, -1)
    assert curve.qp_type == QPType(a=0)
    _, _, z, w = variables(curve.field)
    assert curve.ideal.contains_form(z * w)
    assert len(curve.filtration) == 2

    report = describe(curve)
    assert report.support == ON_M
    assert report.qp_type == QPType(a=0)
    assert report.condition_flags["2,0"] is True


def test_window_argument_overrides_the_file(tmp_path):
    path = write(tmp_path / "c20.json", [
        [[[2, 0, 0, 0], 1]],
        [[[1, 1, 0, 0], 1]],
        [[[0, 2, 0, 0], 1]],
        [[[1, 0, 0, 1], 1], [[0, 1, 1, 0], -1]],
    ], window=9)
    assert import_ideal(path).window == 9
    assert import_ideal(path, window=13).window == 13


def test_cube_of_the_line_is_not_quasiprimitive(tmp_path):
    cubes = [[[[i, 3 - i, 0, 0], 1]] for i in range(4)]
    curve = import_ideal(write(tmp_path / "cube.json", cubes))
    report = describe(curve)
    assert report.degree == 6
    assert report.quasiprimitive is False
    assert report.qp_type is None


def test_unsupported_ideal_keeps_hilbert_data(tmp_path):
    curve = import_ideal(write(tmp_path / "xz.json", [[[[1, 0, 0, 0], 1]], [[[0, 0, 1, 0], 1]]]))
    assert curve.support == "other"
    assert (curve.degree, curve.genus) == (1, 0)
    assert describe(curve).condition_flags == {}


def test_coefficients_are_reduced():
    data = IdealFile(field_char=7, generators=[[((1, 0, 0, 0), "1/2"), ((0, 1, 0, 0), -1)]])
    assert data.generators[0][0][1] == 4
    assert data.generators[0][1][1] == 6


@pytest.mark.parametrize("payload", [
    "not json",
    json.dumps({"field_char": 32003, "generators": [[[[1, 0, 0, 0], 1], [[2, 0, 0, 0], 1]]]}),
    json.dumps({"field_char": 32003, "variables": ["x", "y"], "generators": []}),
    json.dumps({"field_char": 32003, "generators": [[[[1, 0, 0, -1], 1]]]}),
])
def test_malformed_files(tmp_path, payload):
    path = tmp_path / "bad.json"
    path.write_text(payload, encoding="utf-8")
    with pytest.raises(MalformedIdealFileError):
        load_ideal_file(path)


def test_missing_or_empty_files(tmp_path):
    with pytest.raises(MalformedIdealFileError):
        import_ideal(tmp_path / "absent.json")
    with pytest.raises(MalformedIdealFileError):
        import_ideal(write(tmp_path / "zero.json", [[[[1, 0, 0, 0], 0]]]))


def test_detect_floor(field):
    x, y, z, w = variables(field)
    floor, support = detect_floor(GradedIdeal([x * x, x * y, y * y, x * w - y * z], field))
    assert (floor, support) == (line_power(2), ON_L)
    floor, support = detect_floor(GradedIdeal([z, w], field))
    assert (floor, support) == (second_line_power(1), ON_M)
