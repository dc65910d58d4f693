import copy
import json
from pathlib import Path

import pytest
from hypothesis import given

from logpdgla import sampling
from logpdgla.schema import (SchemaError, mc_problem_from_json, nerve_from_json, nerve_to_json,
                             resolve_problem_from_json, tw_from_json, tw_to_json)
from logpdgla.toy import torus_chart
from logpdgla.tw import cech_semicosimplicial
from strategies import rng_of, seeds

INPUTS = Path(__file__).resolve().parent.parent / "demos" / "inputs"


def load(name):
    return json.loads((INPUTS / name).read_text())


@pytest.mark.parametrize("name", ["curve", "two-chart", "triangle"])
def test_builtin_nerves_roundtrip_as_documents(name):
    nerve = nerve_from_json(name, 2)
    again = nerve_from_json(nerve_to_json(nerve), 2)
    assert again.simplices == nerve.simplices
    assert again.semicosimplicial_violations() == []
    for s in nerve.simplices:
        assert again.charts[s].ring.variables == nerve.charts[s].ring.variables
    assert nerve_to_json(again) == nerve_to_json(nerve)


@given(seeds)
def test_elements_roundtrip(seed):
    rng = rng_of(seed)
    nerve = nerve_from_json(rng.choice(["curve", "triangle"]), 2)
    x = sampling.tw_element(nerve, -rng.randint(0, 1), rng.randint(0, 2), rng)
    assert tw_from_json(tw_to_json(x), nerve) == x


def test_wedge_order_is_normalized_with_a_sign():
    ch = torus_chart(1)
    nerve = cech_semicosimplicial("torus", ["a"], {("a",): ch}, {}, 1)
    a, b = (g.name for g in ch.generators)

    def doc(wedge):
        term = {"t": [], "dt": [], "wedge": wedge, "coefficient": "1"}
        return {"schemaVersion": 1, "p": -2, "q": 0, "components": [{"simplex": ["a"], "terms": [term]}]}

    assert tw_from_json(doc([b, a]), nerve) == tw_from_json(doc([a, b]), nerve).scale(-1)
    with pytest.raises(SchemaError):
        tw_from_json(doc([a, a]), nerve)


def test_demo_inputs_parse():
    nerve, eta, theta = mc_problem_from_json(load("mc_curve_gauge.json"))
    assert (eta.p, eta.q) == (-1, 1) and theta is not None
    nerve, elem = resolve_problem_from_json(load("resolve_cover_document.json"))
    assert elem is not None and nerve.name


def field_error(doc, parse=mc_problem_from_json):
    with pytest.raises(SchemaError) as info:
        parse(doc)
    return info.value.path


def test_error_paths():
    base = load("mc_curve_gauge.json")
    doc = copy.deepcopy(base)
    doc["schemaVersion"] = 2
    assert field_error(doc) == "schemaVersion"
    doc = copy.deepcopy(base)
    doc["extra"] = 1
    assert field_error(doc) == "extra"
    doc = copy.deepcopy(base)
    del doc["order"]
    assert field_error(doc) == "order"
    doc = copy.deepcopy(base)
    doc["order"] = -1
    assert field_error(doc) == "order"
    doc = copy.deepcopy(base)
    doc["nerve"] = "sphere"
    assert field_error(doc) == "nerve"
    doc = copy.deepcopy(base)
    doc["theta"]["components"][0]["terms"][0]["coefficient"] = "y^"
    assert field_error(doc) == "theta.components[0].terms[0].coefficient"
    doc = copy.deepcopy(base)
    doc["theta"]["components"][0]["simplex"] = ["q"]
    assert field_error(doc) == "theta.components[0].simplex"
    doc = copy.deepcopy(base)
    doc["theta"]["components"][0]["terms"][0]["wedge"] = ["nope"]
    assert field_error(doc) == "theta.components[0].terms[0].wedge"


def test_bidegree_is_checked():
    doc = load("mc_curve_gauge.json")
    doc["eta"], doc["theta"] = doc["theta"], None
    assert field_error(doc) == "eta"


def test_form_monomial_must_fit_the_simplex():
    doc = load("mc_curve_gauge.json")
    doc["theta"]["components"][0]["terms"][0]["t"] = [0, 0, 0]
    assert field_error(doc).startswith("theta.components[0].terms[0]")


def test_cover_document_errors():
    doc = load("resolve_cover_document.json")
    bad = copy.deepcopy(doc)
    bad["nerve"]["cofaces"][0]["images"] = {}
    assert field_error(bad, resolve_problem_from_json) == "nerve.cofaces[0].images"
    bad = copy.deepcopy(doc)
    bad["nerve"]["charts"][0]["generators"][0]["action"] = {"zz": "1"}
    assert field_error(bad, resolve_problem_from_json).endswith("action.zz")
    bad = copy.deepcopy(doc)
    bad["nerve"]["cofaces"] = bad["nerve"]["cofaces"][1:]
    assert field_error(bad, resolve_problem_from_json) == "nerve"
