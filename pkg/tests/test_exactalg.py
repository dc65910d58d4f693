from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from logpdgla.curve import edge_ring, gluing_hom, vertex_ring
from logpdgla.exactalg import (ChartRing, DomainError, MalformedRingError, PolyElement, RingHom, Rule,
                               check_hom, format_terms, hom_apply, ideal_membership, normal_form,
                               parse_terms, truncate_base)
from strategies import polys

V2 = vertex_ring("x", 2)
E2 = edge_ring(("x", "y"), 2)


# sympy oracle: expand, then drop every monomial divisible by (yz)^(k+1) -----------------

def to_sympy(x):
    syms = sympy.symbols(x.ring.variables)
    out = sympy.Integer(0)
    for m, c in x.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            t *= s ** e
        out += t
    return out


def reduce_vertex(expr, ring):
    """Normal form in Q[y, z]/((yz)^(k+1)) computed from scratch with sympy."""
    y, z = sympy.symbols(ring.variables)
    poly = sympy.Poly(sympy.expand(expr), y, z)
    k = ring.order
    terms = {}
    for (a, b), c in poly.terms():
        if c and min(a, b) <= k:
            terms[(a, b)] = Fraction(int(c.p), int(c.q))
    return terms


def test_curve_relation_kills_top_power():
    y, z, t = V2.var("y"), V2.var("z"), V2.base(0)
    assert normal_form(y ** 2 * z ** 2 * t).is_zero()


def test_base_generator_is_yz():
    y, z = V2.var("y"), V2.var("z")
    assert V2.base(0) + y * z == (y * z).scale(2)


def test_normal_form_of_variable_is_itself():
    assert normal_form(V2.var("y")) == V2.var("y")


def test_rewriting_presentation_agrees():
    # t kept as a variable with the rule yz -> t
    S = ChartRing("S", ["y", "z", "t"], [False] * 3, [(0, 0, 1)], 2, [Rule((1, 1, 0), {(0, 0, 1): 1})])
    assert S.parse("y^2*z^2*t").is_zero()
    assert S.parse("t + y*z") == S.parse("2*t")
    assert not S.critical_pairs()


def test_step_budget_detects_looping_rules():
    R = ChartRing("loop", ["a", "b"], [False, False], [(0, 1)], 1, [Rule((1, 0), {(1, 0): 1, (0, 0): 1})])
    with pytest.raises(MalformedRingError):
        R.parse("a")


@given(polys(V2), polys(V2))
def test_product_matches_sympy(a, b):
    assert (a * b).terms == reduce_vertex(to_sympy(a) * to_sympy(b), V2)


@given(polys(V2), polys(V2), polys(V2))
def test_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == V2.zero()
    assert a * V2.one() == a


@given(polys(E2, max_deg=3))
def test_units_invert(a):
    u = E2.one() + a * E2.base(0)
    assert u * u.inverse() == E2.one()


# ring maps -------------------------------------------------------------------------------

H = gluing_hom("x", "y", 2)


def test_gluing_images():
    S, T = H.source, H.target
    assert hom_apply(H, S.var("y")) == T.parse("x^-1")
    assert hom_apply(H, S.var("z")) == T.parse("z*x^2")
    assert hom_apply(H, S.parse("y*z")) == T.parse("z*x")


def test_gluing_is_valid_and_base_compatible():
    rep = check_hom(H)
    assert rep["valid"] and rep["base_compatible"]


def test_identity_hom():
    rep = check_hom(RingHom(V2, V2, V2.gens()))
    assert rep["valid"]


def test_relation_violation_is_reported():
    rep = check_hom(RingHom(V2, V2, [V2.var("z"), V2.var("z")]))
    assert not rep["valid"]
    assert "relation" in rep["failures"][0]


@given(polys(H.source, max_deg=2))
def test_gluing_agrees_with_substitution(a):
    y, z = sympy.symbols("y z")
    x, zz = sympy.symbols("x z")
    sub = sympy.expand(to_sympy(a).subs({y: 1 / x, z: zz * x ** 2}, simultaneous=True))
    want = PolyElement(H.target, {})
    num, den = sympy.fraction(sympy.together(sub))
    # den is a power of x; divide termwise
    dpoly = sympy.Poly(den, x, zz)
    ((dexp, dc),) = dpoly.terms()
    for (ex, ez), c in sympy.Poly(num, x, zz).terms():
        m = [0] * 2
        m[H.target.index("x")] = ex - dexp[0]
        m[H.target.index("z")] = ez - dexp[1]
        want = want + PolyElement(H.target, {tuple(m): Fraction(int(c.p), int(c.q)) / Fraction(int(dc.p), int(dc.q))})
    assert hom_apply(H, a) == want


@given(polys(H.source), polys(H.source))
def test_homs_are_multiplicative(a, b):
    assert H(a * b) == H(a) * H(b)
    assert H(a + b) == H(a) + H(b)
    assert H(H.source.one()) == H.target.one()


# truncation and the base filtration -------------------------------------------------------

def test_truncation_examples():
    R = vertex_ring("x", 2)
    y, z = R.var("y"), R.var("z")
    assert truncate_base(R.one() + y * z, 0) == R.with_order(0).one()
    assert truncate_base((y * z).scale(2) + y, 0) == R.with_order(0).var("y")
    assert truncate_base(y, 2) == y


def test_negative_truncation_rejected():
    with pytest.raises(ValueError):
        truncate_base(V2.var("y"), -1)


@given(polys(V2), polys(V2), st.integers(0, 2))
def test_truncation_is_a_ring_map(a, b, k):
    assert truncate_base(a * b, k) == truncate_base(a, k) * truncate_base(b, k)
    assert truncate_base(a + b, k) == truncate_base(a, k) + truncate_base(b, k)


def test_ideal_membership():
    y, z = V2.var("y"), V2.var("z")
    assert ideal_membership(y * z, 1)
    assert not ideal_membership(V2.one(), 1)
    assert ideal_membership((y * z) ** 2, 2)
    assert not ideal_membership(y * z + y, 1)


@given(polys(V2), polys(V2))
def test_ideal_powers_multiply(a, b):
    a, b = a * V2.base(0), b * V2.base(0)
    assert ideal_membership(a * b, 2)


# text format ------------------------------------------------------------------------------

@given(polys(E2))
def test_format_parse_roundtrip(a):
    assert E2.parse(format_terms(E2, a.terms)) == a


def test_negative_exponent_on_polynomial_variable():
    with pytest.raises(DomainError):
        V2.parse("y^-1")


@pytest.mark.parametrize("text", ["3*", "(y", "y^", "y^z", "2/0", "y/0", "q"])
def test_malformed_text(text):
    with pytest.raises(ValueError):
        parse_terms(text, V2)
