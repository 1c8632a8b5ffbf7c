import json

import jsonschema
import numpy as np
import pytest

from helpers import build_pool
from qlll.errors import ParseError
from qlll.generate import GeneratorKind, GeneratorSpec, generate
from qlll.schemas import INSTANCE_SCHEMA
from qlll.serialize import (
    dumps,
    instance_to_dict,
    load_path,
    loads,
    matrix_from_json,
    matrix_to_json,
)


def reference_doc():
    return instance_to_dict(generate(GeneratorSpec(kind=GeneratorKind.PAPER_EXAMPLES)))


def test_round_trip_is_string_identity():
    for a in build_pool(12):
        text = dumps(a, x=(0.25,) * a.n)
        test, assignment, x = loads(text)
        assert dumps(assignment, x=x) == text


def test_round_trip_pretty_variant():
    a = generate(GeneratorSpec(kind=GeneratorKind.RANDOM_POVM, n=2, local_dim=3, seed=8))
    text = dumps(a, pretty=True)
    test, assignment, x = loads(text)
    assert x is None
    assert dumps(assignment, pretty=True) == text


def test_matrix_wire_format():
    m = np.array([[0.5, 0.5j], [-0.5j, 0.5]])
    rows = matrix_to_json(m)
    assert rows == [[[0.5, 0.0], [0.0, 0.5]], [[-0.0, -0.5], [0.5, 0.0]]]
    assert np.array_equal(matrix_from_json(rows), m)


def test_matrix_parse_errors():
    with pytest.raises(ParseError, match="non-empty"):
        matrix_from_json([])
    with pytest.raises(ParseError, match="expected 3"):
        matrix_from_json([[[1.0, 0.0]]], dim=3)
    with pytest.raises(ParseError, match="square"):
        matrix_from_json([[[1.0, 0.0], [0.0, 0.0]]])
    with pytest.raises(ParseError, match="pair"):
        matrix_from_json([[[1.0, 0.0, 0.0]]])
    with pytest.raises(ParseError, match="pair"):
        matrix_from_json([[[True, 0.0]]])


def test_documents_satisfy_schema():
    jsonschema.validate(reference_doc(), INSTANCE_SCHEMA)
    for a in build_pool(6):
        jsonschema.validate(json.loads(dumps(a, x=(0.5,) * a.n)), INSTANCE_SCHEMA)


def test_test_only_documents():
    doc = reference_doc()
    del doc["events"]
    test, assignment, x = loads(json.dumps(doc))
    assert assignment is None
    assert x is None
    assert test.n == 2


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d.update(version=2), "version"),
        (lambda d: d.pop("version"), "version"),
        (lambda d: d.update(dim="2"), "dim"),
        (lambda d: d.pop("state"), "matrix"),
        (lambda d: d.update(measurements=[]), "measurements"),
        (lambda d: d["measurements"][0].pop("kraus"), "kraus"),
        (lambda d: d["measurements"][0]["kraus"].pop(), "one kraus matrix per outcome"),
        (lambda d: d["measurements"][0].update(outcomes=["0", 1]), "strings"),
        (lambda d: d["events"].append(dict(d["events"][0])), "duplicate"),
        (lambda d: d["events"][0].pop("in"), "each event needs"),
        (lambda d: d["events"][0].update(measurement="1"), "integer"),
        (lambda d: d.update(x=[0.5, True]), "numbers"),
        (lambda d: d.update(x=0.5), "numbers"),
    ],
)
def test_parse_errors(mutate, message):
    doc = reference_doc()
    mutate(doc)
    with pytest.raises(ParseError, match=message):
        loads(json.dumps(doc))


def test_stray_event_outcome_rejected():
    doc = reference_doc()
    doc["events"][0]["in"] = ["0", "zebra"]
    with pytest.raises(Exception) as exc:
        loads(json.dumps(doc))
    assert "zebra" in str(exc.value)


def test_not_json_and_missing_file(tmp_path):
    with pytest.raises(ParseError, match="invalid JSON"):
        loads("{nope")
    with pytest.raises(ParseError, match="cannot read"):
        load_path(str(tmp_path / "absent.json"))
    target = tmp_path / "inst.json"
    target.write_text(dumps(generate(GeneratorSpec(kind=GeneratorKind.PAPER_EXAMPLES))))
    test, assignment, x = load_path(str(target))
    assert assignment is not None and assignment.n == 2
