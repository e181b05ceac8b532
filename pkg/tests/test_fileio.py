import json

import pytest
from hypothesis import given, settings, strategies as st

from instances import two_event
from sharplll.errors import CriterionError, InstanceError
from sharplll.lll import FAMILIES, GenSpec, dumps, generate_instance, load, loads, node_ids
from sharplll.lll.fileio import dumps_assignment, format_fraction, loads_assignment

DOC = {
    "events": [{"id": 0, "occurring": [[1]], "vbl": [0]}, {"id": 1, "occurring": [[2]], "vbl": [0]}],
    "variables": [{"domain": [0, 1, 2], "id": 0, "probs": ["1/3", "1/3", "1/3"]}],
}


def test_canonical_text_is_stable():
    text = dumps(two_event())
    assert text == dumps(loads(text))
    doc = json.loads(text)
    assert doc["meta"] == {"d": 1, "p": "1/3"}
    assert list(doc) == ["events", "meta", "variables"]


def test_fraction_reduction():
    assert format_fraction(loads(json.dumps(DOC)).p) == "1/3"
    doc = json.loads(json.dumps(DOC))
    doc["variables"][0]["probs"] = ["2/6", "3/9", "1/3"]
    assert dumps(loads(json.dumps(doc))) == dumps(loads(json.dumps(DOC)))


@settings(max_examples=20)
@given(st.sampled_from([f for f in FAMILIES if f != "ring"]), st.integers(0, 10 ** 6))
def test_generated_files_round_trip(family, seed):
    text = dumps(generate_instance(GenSpec(family, 15, seed=seed)))
    assert dumps(loads(text)) == text


def test_meta_mismatch_is_an_error():
    doc = dict(DOC, meta={"p": "1/2"})
    with pytest.raises(InstanceError, match="meta declares p"):
        loads(json.dumps(doc))
    doc = dict(DOC, meta={"d": 3})
    with pytest.raises(InstanceError, match="meta declares d"):
        loads(json.dumps(doc))


def test_zero_probability_symbols_stripped():
    doc = json.loads(json.dumps(DOC))
    doc["variables"][0]["domain"] = [0, 1, 2, 3]
    doc["variables"][0]["probs"] = ["1/3", "1/3", "1/3", "0/1"]
    doc["events"][0]["occurring"] = [[1], [3]]
    inst = loads(json.dumps(doc))
    assert inst.variables[0].domain == (0, 1, 2)
    assert inst.events[0].occurring == ((1,),)


def test_criterion_enforced_unless_forced():
    doc = {
        "events": [{"id": 0, "occurring": [[1]], "vbl": [0]}, {"id": 1, "occurring": [[0]], "vbl": [0]}],
        "variables": [{"domain": [0, 1], "id": 0, "probs": ["1/2", "1/2"]}],
    }
    with pytest.raises(CriterionError):
        loads(json.dumps(doc))
    assert loads(json.dumps(doc), force=True).d == 1


@pytest.mark.parametrize("text", [
    "{", "[]", '{"variables": []}', '{"variables": [], "events": [], "extra": 1}',
    '{"variables": [{"id": 0, "domain": [0], "probs": [1]}], "events": []}',
    '{"variables": [{"id": 0, "domain": [0, 1], "probs": ["1/2", "1/3"]}], "events": []}',
    '{"variables": [{"id": 0, "domain": [0.5], "probs": ["1/1"]}], "events": []}',
    '{"variables": [], "events": [{"id": 0, "vbl": [3], "occurring": []}]}',
])
def test_malformed_documents(text):
    with pytest.raises(InstanceError):
        loads(text)


def test_load_missing_file(tmp_path):
    with pytest.raises(InstanceError):
        load(tmp_path / "nope.json")


def test_node_ids_from_meta():
    doc = dict(DOC, meta={"ids": [10, 3]})
    assert node_ids(loads(json.dumps(doc))) == {0: 10, 1: 3}
    with pytest.raises(InstanceError):
        loads(json.dumps(dict(DOC, meta={"ids": [1, 1]})))


def test_assignment_round_trip():
    a = {0: 1, 12: "x", 3: 0}
    assert loads_assignment(dumps_assignment(a)) == a
