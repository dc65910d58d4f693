import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from logpdgla.apl import (APLForm, PreconditionError, ResourceError, apl_d, apl_extend, apl_face,
                          apl_integrate, apl_wedge, bump, faces_compatible)
from logpdgla.oracles import dirichlet, simplex_integral
from strategies import fractions


@st.composite
def forms(draw, n, q, max_terms=3, max_deg=2):
    if q > n:
        return APLForm.zero(n, q)
    dts = list(itertools.combinations(range(n), q))
    key = st.tuples(st.tuples(*[st.integers(0, max_deg)] * n), st.sampled_from(dts))
    return APLForm(n, q, draw(st.dictionaries(key, fractions(), max_size=max_terms)))


def sympy_poly(form):
    """A degree-0 form as a sympy polynomial in t_0 .. t_(n-1)."""
    ts = sympy.symbols(f"t0:{form.n}")
    out = sympy.Integer(0)
    for (e, _), c in form.terms.items():
        out += sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[t ** a for t, a in zip(ts, e)])
    return out, ts


def test_products_of_generators():
    t0, dt0 = APLForm.t(1, 0), APLForm.dt(1, 0)
    assert apl_wedge(t0, dt0) == APLForm(1, 1, {((1,), (0,)): 1})
    assert not apl_wedge(dt0, dt0)
    a, b = APLForm.dt(2, 0), APLForm.dt(2, 1)
    assert apl_wedge(a, b) == -apl_wedge(b, a)


def test_mismatched_simplices():
    with pytest.raises(ValueError):
        apl_wedge(APLForm.t(1, 0), APLForm.t(2, 0))


def test_differential_examples():
    t0 = APLForm.t(1, 0)
    assert apl_d(apl_wedge(t0, t0)) == apl_wedge(t0, APLForm.dt(1, 0)).scale(2)
    assert not apl_d(APLForm.dt(1, 0))
    s0, s1 = APLForm.t(2, 0), APLForm.t(2, 1)
    assert apl_d(apl_wedge(s0, s1)) == apl_wedge(s1, APLForm.dt(2, 0)) + apl_wedge(s0, APLForm.dt(2, 1))


@given(forms(2, 0))
def test_d_of_function_matches_sympy(f):
    expr, ts = sympy_poly(f)
    want = APLForm.zero(2, 1)
    for j, t in enumerate(ts):
        dj = sympy.Poly(sympy.diff(expr, t), *ts) if expr != 0 else None
        if dj is None:
            continue
        for e, c in dj.terms():
            if c:
                want = want + APLForm(2, 1, {(e, (j,)): Fraction(int(c.p), int(c.q))})
    assert apl_d(f) == want


def test_faces_of_coordinates():
    t0 = APLForm.t(1, 0)
    assert apl_face(t0, 0) == APLForm.zero(0)
    assert apl_face(t0, 1) == APLForm.const(0)
    with pytest.raises(ValueError):
        apl_face(t0, 5)


def test_face_kills_its_own_differential():
    # on Delta^2 the face t_0 = 0 kills dt_0
    assert not apl_face(APLForm.dt(2, 0), 0)


@pytest.mark.parametrize("n", [1, 2, 3])
@given(data=st.data())
def test_d_squared_and_faces(n, data):
    q = data.draw(st.integers(0, n))
    w = data.draw(forms(n, q))
    assert not apl_d(apl_d(w))
    for j in range(n + 1):
        assert apl_face(apl_d(w), j) == apl_d(apl_face(w, j))


@given(forms(2, 1), forms(2, 1), forms(2, 0))
def test_wedge_is_graded_commutative_and_leibniz(a, b, f):
    assert apl_wedge(a, b) == -apl_wedge(b, a)
    assert apl_d(apl_wedge(f, a)) == apl_wedge(apl_d(f), a) + apl_wedge(f, apl_d(a))


@given(forms(2, 1), forms(2, 0))
def test_faces_are_algebra_maps(a, f):
    for j in range(3):
        assert apl_face(apl_wedge(f, a), j) == apl_wedge(apl_face(f, j), apl_face(a, j))


# extension --------------------------------------------------------------------------

def test_zero_faces_extend_to_zero():
    assert not apl_extend([APLForm.zero(0), APLForm.zero(0)])


def test_vertex_values_extend_linearly():
    a, b = Fraction(3), Fraction(-2, 7)
    ext = apl_extend([APLForm.const(0, a), APLForm.const(0, b)])
    assert ext == APLForm.const(1, a) + APLForm.t(1, 0).scale(b - a)


@pytest.mark.parametrize("n", [1, 2, 3])
@given(data=st.data())
def test_extension_restricts_to_faces(n, data):
    q = data.draw(st.integers(0, n - 1))
    w = data.draw(forms(n, q))
    faces = [apl_face(w, j) for j in range(n + 1)]
    assert faces_compatible(faces)
    ext = apl_extend(faces)
    assert [apl_face(ext, j) for j in range(n + 1)] == faces


def test_incompatible_faces():
    with pytest.raises(PreconditionError):
        apl_extend([APLForm.const(1, 1), APLForm.const(1, 2), APLForm.const(1, 1)])


def test_ceiling_is_reported():
    w = apl_wedge(APLForm.t(2, 0), apl_wedge(APLForm.t(2, 0), APLForm.t(2, 1)))
    faces = [apl_face(w, j) for j in range(3)]
    with pytest.raises(ResourceError, match="1"):
        apl_extend(faces, ceiling=1)


def test_bump_vanishes_on_faces():
    for n in (1, 2, 3):
        b = bump(n)
        assert b and all(not apl_face(b, j) for j in range(n + 1))


# integration ------------------------------------------------------------------------

def test_volume_of_simplices():
    assert apl_integrate(APLForm.dt(1, 0)) == -1
    assert apl_integrate(apl_wedge(APLForm.dt(2, 0), APLForm.dt(2, 1))) == Fraction(1, 2)


@given(st.tuples(st.integers(0, 4), st.integers(0, 4)))
def test_monomial_integrals_are_dirichlet(e):
    f = APLForm(2, 2, {(e, (0, 1)): 1})
    assert apl_integrate(f) == dirichlet(list(e))


@given(forms(2, 2))
def test_integral_matches_sympy(w):
    s, t = sympy.symbols("s t")
    expr = sympy.Integer(0)
    for (e, _), c in w.terms.items():
        expr += sympy.Rational(c.numerator, c.denominator) * s ** e[0] * t ** e[1]
    val = sympy.integrate(sympy.integrate(expr, (t, 0, 1 - s)), (s, 0, 1))
    assert apl_integrate(w) == Fraction(int(val.p), int(val.q))


@pytest.mark.parametrize("n", [1, 2, 3])
@given(data=st.data())
def test_stokes(n, data):
    w = data.draw(forms(n, n - 1))
    lhs = apl_integrate(apl_d(w))
    rhs = sum((-1) ** j * apl_integrate(apl_face(w, j)) for j in range(n + 1))
    assert lhs == rhs


def test_iterated_integration_oracle():
    assert simplex_integral({(0, 0): 1}, 2) == Fraction(1, 2)
    assert simplex_integral({(1, 2, 0): 1}, 3) == dirichlet([1, 2, 0])
