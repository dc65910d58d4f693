import pytest
from hypothesis import given

from logpdgla import sampling
from logpdgla.apl import APLForm, apl_wedge, bump
from logpdgla.curve import build_curve, coface, coface_functions, from_params, global_d, to_params
from logpdgla.logdef import gauge_exp
from logpdgla.signs import koszul
from logpdgla.toy import line_chart, triangle_nerve, two_chart_nerve
from logpdgla.tw import (CoverNerve, NerveError, TWElement, cech_semicosimplicial, extract_h0, from_global,
                         is_valid, pure, tw_base_change, tw_bracket, tw_d, tw_gauge, tw_minus_one_nonzero,
                         tw_unit, tw_validate, tw_wedge)
from strategies import rng_of, seeds

CURVE = build_curve(2)
N = CURVE.nerve
NERVES = [build_curve(1).nerve, N, triangle_nerve(1), triangle_nerve(2)]


def single_chart(k=2):
    ch = line_chart("a", k)
    return cech_semicosimplicial("single", ["a"], {("a",): ch}, {}, k), ch


def random_triple(seed, small=False):
    rng = rng_of(seed)
    nerve = rng.choice(NERVES)
    kw = {"nterms": 1, "maxdeg": 1} if small else {}
    out = []
    for _ in range(3):
        p, q = -rng.randint(0, 1), rng.randint(0, 1)
        out.append(sampling.tw_element(nerve, p, q, rng, **kw))
    return nerve, out


# the semicosimplicial structure -----------------------------------------------------------

def test_curve_nerve_shape():
    assert [s for s in N.simplices if len(s) == 1] == [("x",), ("y",), ("z",)]
    assert len(N.of_dim(1)) == 3 and not N.of_dim(2)
    assert N.semicosimplicial_violations() == []


def test_curve_cofaces_on_constants():
    # vertex family (a, b, c) on (V_x, V_y, V_z); edges in the order yz, zx, xy
    assert coface_functions(CURVE, 0, ["1", "2", "3"]) == (3, 3, 2)
    assert coface_functions(CURVE, 1, ["1", "2", "3"]) == (2, 1, 1)


def test_single_chart_cover():
    nerve, ch = single_chart()
    assert nerve.simplices == (("a",),) and not nerve.cofaces
    x = pure(nerve, ("a",), APLForm.const(0), ch.gen(0, ch.ring.var("x")))
    assert is_valid(x)


def test_missing_coface_is_rejected():
    T = triangle_nerve(1)
    cof = dict(T.cofaces)
    cof.pop(next(iter(cof)))
    with pytest.raises(NerveError):
        CoverNerve("broken", T.chart_ids, T.charts, cof, T.order)


# validity ---------------------------------------------------------------------------------

def test_unit_is_valid():
    assert tw_validate(tw_unit(N))["valid"]


def test_reconstructed_tuple_is_valid_and_perturbation_is_not():
    R = {a: CURVE.vertex_charts[a] for a in "xyz"}
    verts = tuple(R[a].function(R[a].ring.parse(s)) for a, s in zip("xyz", ["y + 2", "z", "x^2"]))
    x = from_params(CURVE, verts, ({}, {}, {}))
    assert tw_validate(x)["valid"]
    assert to_params(CURVE, x) == (verts, ({}, {}, {}))
    comps = {s: dict(x.component(s)) for s in N.simplices if x.component(s)}
    e = ("x", "y")
    key = ((0,), ())
    comps[e][key] = comps[e][key] + CURVE.edge_charts[e].function(1)
    bad = TWElement(N, 0, 0, comps)
    rep = tw_validate(bad)
    assert not rep["valid"] and rep["simplex"] == e and rep["witness"]


@given(seeds)
def test_tails_roundtrip(seed):
    rng = rng_of(seed)
    x = sampling.tw_element(N, 0, 0, rng)
    verts, tails = to_params(CURVE, x)
    assert from_params(CURVE, verts, tails) == x


# operations -------------------------------------------------------------------------------

def test_d_of_constant_families():
    assert not tw_d(tw_unit(N))
    assert not tw_d(global_d(CURVE))


def test_odd_form_squares_to_zero():
    e = ("x", "y")
    ch = N.charts[e]
    a = pure(N, e, apl_wedge(APLForm.dt(1, 0), APLForm.const(1)), ch.gen(0))
    b = pure(N, e, APLForm.dt(1, 0), ch.function(1))
    assert not tw_wedge(a, b)


@given(seeds)
def test_validity_closure_and_d_squared(seed):
    nerve, (x, y, _) = random_triple(seed)
    assert is_valid(x) and is_valid(y)
    for z in (tw_d(x), tw_wedge(x, y), tw_bracket(x, y)):
        assert is_valid(z)
    assert not tw_d(tw_d(x))


@given(seeds)
def test_leibniz_laws(seed):
    _, (x, y, _) = random_triple(seed)
    a = x.degree
    assert tw_d(tw_wedge(x, y)) == tw_wedge(tw_d(x), y) + tw_wedge(x, tw_d(y)).scale(koszul(a, 1))
    assert tw_d(tw_bracket(x, y)) == tw_bracket(tw_d(x), y) + tw_bracket(x, tw_d(y)).scale(koszul(a + 1, 1))


@given(seeds)
def test_total_degree_gerstenhaber_axioms(seed):
    _, (x, y, z) = random_triple(seed, small=True)
    a, b = x.degree, y.degree
    assert tw_wedge(x, y) == tw_wedge(y, x).scale(koszul(a, b))
    assert tw_bracket(x, y) == tw_bracket(y, x).scale(-koszul(a + 1, b + 1))
    lhs = tw_bracket(x, tw_bracket(y, z))
    assert lhs == tw_bracket(tw_bracket(x, y), z) + tw_bracket(y, tw_bracket(x, z)).scale(koszul(a + 1, b + 1))


@given(seeds)
def test_base_change_commutes(seed):
    nerve, (x, y, _) = random_triple(seed)
    k = nerve.order - 1
    tx, ty = tw_base_change(x, k), tw_base_change(y, k)
    assert is_valid(tx)
    assert tw_d(tx) == tw_base_change(tw_d(x), k)
    assert tw_bracket(tx, ty) == tw_base_change(tw_bracket(x, y), k)
    assert tw_wedge(tx, ty) == tw_base_change(tw_wedge(x, y), k)


def test_base_change_to_same_order():
    x = sampling.tw_element(N, -1, 1, rng_of(0))
    assert tw_base_change(x, N.order) == x


def test_base_change_of_coface_image():
    V = CURVE.vertex_charts
    fam = [V[a].function(V[a].ring.var(v)) for a, v in zip("xyz", "yzx")]
    low = build_curve(1)
    W = low.vertex_charts
    fam1 = [W[a].function(W[a].ring.var(v)) for a, v in zip("xyz", "yzx")]
    for e, hi, lo in zip(("y", "x", "x"), coface(CURVE, 0, fam), coface(low, 0, fam1)):
        assert hi.truncate(1) == lo


# global sections ------------------------------------------------------------------------

def test_h0_of_unit_and_glued_generator():
    assert all(v == CURVE.vertex_charts[a].function(1) for a, v in extract_h0(tw_unit(N)).items())
    h0 = extract_h0(global_d(CURVE))
    assert all(v == CURVE.vertex_charts[a].gen(0) for a, v in h0.items())


def test_h0_rejects_disagreeing_data():
    V = CURVE.vertex_charts
    fam = {a: V[a].gen(0) for a in "xyz"}
    x = from_global(N, fam)
    comps = {s: dict(x.component(s)) for s in N.simplices if x.component(s)}
    comps[("x",)] = {((), ()): V["x"].gen(0).scale(2)}
    with pytest.raises(ValueError):
        extract_h0(TWElement(N, -1, 0, comps))


# gauge and (-1)-injectivity ---------------------------------------------------------------

def test_gauge_by_zero():
    x = sampling.tw_element(N, -1, 1, rng_of(1))
    assert tw_gauge(TWElement(N, -1, 0, {}), x) == x


@given(seeds)
def test_gauge_on_a_single_chart_matches_chart_gauge(seed):
    nerve, ch = single_chart()
    rng = rng_of(seed)
    theta = sampling.gerst(ch, -1, rng, min_order=1)
    x = sampling.gerst(ch, -rng.randint(0, ch.dim), rng)
    one = APLForm.const(0)
    got = tw_gauge(pure(nerve, ("a",), one, theta), pure(nerve, ("a",), one, x))
    assert got == pure(nerve, ("a",), one, gauge_exp(theta, x))


def test_injectivity_witness_for_glued_generator():
    s, var, probe, val = tw_minus_one_nonzero(global_d(CURVE))
    assert s == ("x",) and var == "y"
    V = CURVE.vertex_charts["x"]
    assert probe.component(("x",)) == {((), ()): V.function(V.ring.var("y"))}
    assert val


def test_injectivity_witness_on_an_edge():
    T = two_chart_nerve(1)
    e = ("a", "b")
    ch = T.charts[e]
    theta = pure(T, e, apl_wedge(bump(1), APLForm.dt(1, 0)), ch.gen(0))
    s, var, probe, val = tw_minus_one_nonzero(theta)
    assert s == e and val


def test_injectivity_rejects_zero():
    with pytest.raises(ValueError):
        tw_minus_one_nonzero(TWElement(N, -1, 0, {}))
