"""Loading and saving category and representation documents."""
import json
from pathlib import Path

import pytest

from core.exceptions import InputFormatError, InvalidInputError, StructuralError
from core.report import report_success
from services.based_cat import build_cartan_category, build_group_category, build_scalar_category
from services.groups import symmetric
from services.soergel import build_dihedral_soergel
from storage.json_store import JsonStore

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def store(tmp_path):
    return JsonStore(str(tmp_path))


def test_save_is_sorted_with_trailing_newline(store, tmp_path):
    path = store.save_json("nested/doc.json", {"b": 1, "a": [1, 2]})
    assert path == tmp_path / "nested" / "doc.json"
    assert path.read_text(encoding="utf-8") == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_category_round_trip(store, b2):
    store.save_json("b2.json", b2.to_dict())
    again = store.load_category("b2.json")
    assert again.to_dict() == b2.to_dict()


def test_category_from_report_envelope(store, exotic):
    envelope = report_success("build-group", {"category": exotic.to_dict()}).to_dict()
    store.save_json("report.json", envelope)
    assert store.load_category("report.json").compose("F", "F") == {"F": 2}


def test_envelope_without_the_key(store, exotic):
    store.save_json("report.json", report_success("cells", {"cells": []}).to_dict())
    with pytest.raises(InvalidInputError):
        store.load_category("report.json")


def test_rep_with_relative_category(store, exotic, exotic_rep):
    store.save_json("cats/exotic.json", exotic.to_dict())
    store.save_json("cats/rep.json", {"category": "exotic.json", **exotic_rep.to_dict(inline_category=False)})
    rep = store.load_rep("cats/rep.json")
    assert rep.matrices["F"].tolist() == [[1, 1], [1, 1]]


def test_rep_with_inline_category(store, exotic_rep):
    store.save_json("rep.json", exotic_rep.to_dict())
    assert store.load_rep("rep.json").ind_objects == {"i": ("X1", "X2")}


def test_rep_needs_a_category(store, exotic_rep):
    store.save_json("rep.json", exotic_rep.to_dict(inline_category=False))
    with pytest.raises(InvalidInputError):
        store.load_rep("rep.json")


def test_rep_with_wrong_shapes(store, exotic_rep):
    data = exotic_rep.to_dict()
    data["matrices"]["F"] = [[1, 1]]
    store.save_json("rep.json", data)
    with pytest.raises(StructuralError):
        store.load_rep("rep.json")


def test_malformed_json_reports_position(store, tmp_path):
    (tmp_path / "bad.json").write_text('{"objects": [1,,2]}', encoding="utf-8")
    with pytest.raises(InputFormatError) as info:
        store.load_json("bad.json")
    assert info.value.details["line"] == 1
    assert info.value.details["column"] == 16
    assert info.value.exit_code == 2


def test_non_object_category(store):
    store.save_json("list.json", [1, 2])
    with pytest.raises(InvalidInputError):
        store.load_category("list.json")


def test_parse_inline_option():
    assert JsonStore.parse("[[2,1],[1,2]]") == [[2, 1], [1, 2]]
    with pytest.raises(InputFormatError):
        JsonStore.parse("[[2,1],", "--cartan")
    assert json.dumps(JsonStore.unwrap({"x": 1}, "category")) == '{"x": 1}'


@pytest.mark.parametrize(
    "name, build",
    [
        ("exotic.json", lambda: build_scalar_category(2)),
        ("dual_numbers.json", lambda: build_cartan_category([[2]], [1])),
        ("symmetric_two.json", lambda: build_cartan_category([[2, 1], [1, 2]], [1, 2])),
        ("b2.json", lambda: build_dihedral_soergel(4)),
        ("s3.json", lambda: build_group_category(symmetric(3))),
    ],
)
def test_committed_examples_match_builders(name, build):
    assert JsonStore(str(DATA)).load_category(name).to_dict() == build().to_dict()
