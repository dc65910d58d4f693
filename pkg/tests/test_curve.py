import copy
import time

import pytest
from hypothesis import given

from logpdgla import sampling
from logpdgla.curve import (EDGE_ORDER, bounded_slice_dims, build_curve, construction_checks, curve_report,
                            dlog_transition, embedded, from_params, global_d, gluing_hom, golden_checks,
                            load_golden, omega_transition_check, structure_iso, to_params)
from logpdgla.tw import is_valid, tw_unit
from strategies import rng_of, seeds

CURVES = {k: build_curve(k) for k in range(5)}


@pytest.mark.parametrize("k", range(5))
def test_golden_values(k):
    failed = [(n, d) for n, ok, d in golden_checks(CURVES[k]) if not ok]
    assert not failed


def test_golden_suite_is_fast():
    start = time.perf_counter()
    for k in range(4):
        golden_checks(build_curve(k))
    assert time.perf_counter() - start < 60


@pytest.mark.parametrize("field, index, key, value", [
    ("gluings", 0, "images", {"y": "x^-1", "z": "z*x"}),
    ("generators", 1, "action", {"z": "-z", "x": "x"}),
    ("cofaces", 0, "output", ["1", "2", "3"]),
])
def test_golden_checks_notice_wrong_values(field, index, key, value):
    golden = copy.deepcopy(load_golden())
    golden[field][index][key] = value
    assert not all(ok for _, ok, _ in golden_checks(CURVES[2], golden))


def test_negative_order_is_rejected():
    with pytest.raises(ValueError):
        build_curve(-1)


def test_construction_is_consistent():
    for inst in CURVES.values():
        assert construction_checks(inst) == []


# reference values written out independently of the data file -----------------------------

def test_gluing_images_by_hand():
    h = gluing_hom("y", "z", 2)
    assert h(h.source.var("z")) == h.target.parse("y^-1")
    assert h(h.source.var("x")) == h.target.parse("x*y^2")
    h = gluing_hom("z", "x", 2)
    assert h(h.source.var("x")) == h.target.parse("z^-1")
    assert h(h.source.var("y")) == h.target.parse("y*z^2")


def test_dlog_transitions_invert():
    for a, b in (("x", "y"), ("y", "z"), ("z", "x")):
        fwd, back = dlog_transition(a, b), dlog_transition(b, a)
        for v, row in fwd.items():
            comp = {}
            for w, e in row.items():
                for u, f in back[w].items():
                    comp[u] = comp.get(u, 0) + e * f
            assert {u: c for u, c in comp.items() if c} == {v: 1}


def test_dlog_transition_by_hand():
    assert dlog_transition("x", "y") == {"y": {"x": -1}, "z": {"x": 2, "z": 1}}


def test_omega_glues():
    assert all(ok for _, ok, _ in omega_transition_check(CURVES[3]))


def test_generator_names_and_actions():
    for a, name, (u, v) in (("x", "d_yz", "yz"), ("y", "d_zx", "zx"), ("z", "d_xy", "xy")):
        ch = CURVES[1].vertex_charts[a]
        g = ch.generators[0]
        R = ch.ring
        assert g.name == name
        assert list(g.action) == [R.var(u), -R.var(v)]


# the parametrization of TW^{0,0} -------------------------------------------------------------

def test_unit_coordinates():
    inst = CURVES[2]
    verts, tails = to_params(inst, tw_unit(inst.nerve))
    assert all(v == inst.vertex_charts[a].function(1) for a, v in zip("xyz", verts))
    assert tails == ({}, {}, {})
    assert len(embedded(inst, tw_unit(inst.nerve))) == 6


@given(seeds)
def test_structure_iso_roundtrip(seed):
    inst = CURVES[2]
    rng = rng_of(seed)
    fwd, back = structure_iso(inst)
    verts = tuple(ch.function(sampling.poly(ch.ring, rng)) for ch in (inst.vertex_charts[a] for a in "xyz"))
    tails = tuple({i: inst.edge_charts[e].function(sampling.poly(inst.edge_charts[e].ring, rng))
                   for i in range(2, 2 + rng.randint(0, 2))} for e in EDGE_ORDER)
    x = back(inst, verts, tails)
    assert is_valid(x)
    got_v, got_t = fwd(inst, x)
    assert got_v == verts
    assert got_t == tuple({i: v for i, v in t.items() if v} for t in tails)


def test_tails_must_start_at_two():
    inst = CURVES[1]
    verts = tuple(inst.vertex_charts[a].function(1) for a in "xyz")
    with pytest.raises(ValueError):
        from_params(inst, verts, ({1: inst.edge_charts[EDGE_ORDER[0]].function(1)}, {}, {}))


def test_to_params_needs_a_valid_function():
    with pytest.raises(ValueError):
        to_params(CURVES[1], global_d(CURVES[1]))


# reports ------------------------------------------------------------------------------------

def test_slice_dimensions_by_counting():
    # V_x: y^a z^b with a + b <= 2 and min(a, b) <= k; edges: y^a t^b with |a| + b <= 2 and b <= k
    assert bounded_slice_dims(CURVES[0]) == {"V_x": 5, "V_y": 5, "V_z": 5, "V_yz": 5, "V_xz": 5, "V_xy": 5}
    assert set(bounded_slice_dims(CURVES[1]).values()) == {6, 8}
    assert set(bounded_slice_dims(CURVES[3]).values()) == {6, 9}


@pytest.mark.parametrize("k", [0, 2])
def test_report_flags(k):
    rep = curve_report(CURVES[k])
    assert rep["passed"] and rep["dgla"] and rep["ell_zero"]
    assert rep["central_fiber"] == (k == 0)
    assert "seconds" not in rep
    assert "seconds" in curve_report(CURVES[k], timing=True)
