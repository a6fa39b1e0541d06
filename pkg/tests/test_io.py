import json
from fractions import Fraction as F

import pytest
from hypothesis import given

from plrot import io
from plrot.errors import Discontinuity, FormatError
from plrot.flows import analyze_flow, example42, example43
from plrot.markov import height, markov_table
from plrot.traintrack import rotation_number_exact, run_pipeline

from .conftest import pl_maps


@pytest.mark.parametrize("text,value", [("3/8", F(3, 8)), ("-1/2", F(-1, 2)), ("7", F(7)), ("2/4", F(1, 2)), ("0", F(0))])
def test_parse_rational(text, value):
    assert io.parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1/0", " 1/2", "1e3", "a", 0.5, None, "1/-2"])
def test_parse_rational_rejects(text):
    with pytest.raises(FormatError):
        io.parse_rational(text)


@given(pl_maps())
def test_map_roundtrip_bytes(t):
    text = io.dumps(io.map_to_doc(t))
    again = io.map_from_doc(json.loads(text))
    assert again == t
    assert io.dumps(io.map_to_doc(again)) == text


def test_map_doc_shape(t0):
    doc = io.map_to_doc(t0)
    assert doc == {
        "base": 2,
        "pieces": [
            {"domain_left": "0", "exponent": -1, "image_left": "0"},
            {"domain_left": "1/2", "exponent": 0, "image_left": "1/4"},
            {"domain_left": "3/4", "exponent": 1, "image_left": "1/2"},
        ],
    }


def test_map_doc_validation_errors():
    bad = {"base": 2, "pieces": [{"domain_left": "0", "exponent": -1, "image_left": "0"}, {"domain_left": "1/2", "exponent": 0, "image_left": "1/2"}]}
    with pytest.raises(Discontinuity):
        io.map_from_doc(bad)
    with pytest.raises(FormatError):
        io.map_from_doc({"base": 2})
    with pytest.raises(FormatError):
        io.map_from_doc({"base": "2", "pieces": []})


@given(pl_maps())
def test_table_roundtrip(t):
    table = markov_table(t, height(t))
    assert io.table_from_doc(json.loads(io.dumps(io.table_to_doc(table)))) == table


def test_abstract_track_roundtrip():
    tr = example43(2, 3, 2)
    doc = io.track_to_doc(tr)
    again = io.track_from_doc(json.loads(io.dumps(doc)))
    assert io.track_to_doc(again) == doc
    assert analyze_flow(again).circles == (2 * 2 * 2**3,)


def test_track_doc_rejects_inconsistent_ports():
    doc = io.track_to_doc(example43(1, 1, 2))
    doc["switches"][0]["ins"] = list(reversed(doc["switches"][0]["ins"]))
    with pytest.raises(FormatError):
        io.track_from_doc(doc)
    doc = io.track_to_doc(example43(1, 1, 2))
    doc["edges"][0]["tail"] = None
    with pytest.raises(FormatError):
        io.track_from_doc(doc)


def test_train_track_doc_has_intervals():
    doc = io.track_to_doc(run_pipeline(example42(1, 1)).tau)
    assert sorted(i for e in doc["edges"] for i in e["intervals"]) == list(range(5))


def test_report_doc():
    doc = io.report_to_doc(rotation_number_exact(example42(2, 2)))
    assert doc["rotation_number"] == "4/17"
    assert doc["least_period"] == 17
    assert doc["bound"] == 2048
    assert doc["circles"][0]["interval_count"] == 17
    json.dumps(doc)
