from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from logpdgla import sampling
from logpdgla.curve import build_curve
from logpdgla.exactalg import ideal_membership
from logpdgla.logdef import (LogAutomorphism, LogDerivation, PreconditionError, ResourceError, bch,
                             bch_general, derivation_to_gerst, exp_derivation, gauge_exp, gerst_bch,
                             gerst_to_derivation, lie_bracket, log_automorphism, sigma_sequence,
                             verify_auto_gauge)
from logpdgla.oracles import bch_reference, commutator, random_nilpotent
from strategies import rng_of, seeds

CURVES = {k: build_curve(k) for k in (1, 2, 3)}
CHART_NAMES = [("x",), ("y",), ("z",), ("x", "y"), ("y", "z"), ("x", "z")]


def vz(k):
    return CURVES[k].log_charts[("z",)]


def twist(k):
    """``t (x d_x - y d_y)`` with ``Delta(e_x) = t``, ``Delta(e_y) = -t`` on V_z."""
    L = vz(k)
    R = L.ring
    t, x, y = R.base(0), R.var("x"), R.var("y")
    return LogDerivation(L, {"x": t * x, "y": -(t * y)}, {"e_x": t, "e_y": -t})


def test_exp_of_zero_is_identity():
    L = vz(2)
    zero = LogDerivation(L, [0, 0], [0, 0])
    assert exp_derivation(zero) == LogAutomorphism.identity(L)
    assert not log_automorphism(LogAutomorphism.identity(L))


def test_exp_of_the_twist_over_dual_numbers():
    dd = twist(1)
    R = dd.chart.ring
    t, x, y = R.base(0), R.var("x"), R.var("y")
    aut = exp_derivation(dd)
    assert aut.phi == ((R.one() + t) * x, (R.one() - t) * y)
    assert aut.units == (R.one() + t, R.one() - t)
    assert aut.units[0] * aut.units[1] == R.one()
    assert not aut.violations()
    assert log_automorphism(aut) == dd


def test_exp_of_second_order_derivation_truncates_to_identity():
    dd = twist(2)
    t = dd.chart.ring.base(0)
    deep = LogDerivation(dd.chart, [t * v for v in dd.D], [t * v for v in dd.Delta])
    assert exp_derivation(deep).truncate(1) == LogAutomorphism.identity(vz(2).truncated(1))


def test_exp_needs_nilpotent_values():
    L = vz(1)
    R = L.ring
    with pytest.raises(PreconditionError):
        exp_derivation(LogDerivation(L, {"x": R.var("x"), "y": -R.var("y")}, {"e_x": 1, "e_y": -1}))


def test_sigma_recursion_lands_in_ideal_powers():
    aut = exp_derivation(twist(3))
    for n, s in enumerate(sigma_sequence(aut, 0, 4)):
        assert ideal_membership(s, n)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("name", CHART_NAMES)
@given(seed=seeds)
def test_log_exp_roundtrips(k, name, seed):
    L = CURVES[k].log_charts[name]
    rng = rng_of(seed)
    dd = sampling.log_derivation(L, rng)
    assert not dd.violations()
    assert log_automorphism(exp_derivation(dd)) == dd
    aut = sampling.log_automorphism(L, rng)
    assert not aut.violations()
    assert exp_derivation(log_automorphism(aut)) == aut


# BCH -----------------------------------------------------------------------------------

def test_bch_with_zero():
    dd = twist(2)
    zero = dd.scale(0)
    assert bch(dd, zero) == dd


def test_bch_truncates_when_triple_brackets_vanish():
    # strictly upper triangular 3x3 matrices: every double commutator is zero
    rng = rng_of(4)
    for _ in range(10):
        a, b = random_nilpotent(rng, 3), random_nilpotent(rng, 3)
        want = a + b + commutator(a, b).scale(Fraction(1, 2))
        assert bch_general(a, b, commutator, 6) == want == bch_reference(a, b)


@given(seed=seeds, n=st.integers(2, 5))
def test_bch_against_matrix_exponentials(seed, n):
    rng = rng_of(seed)
    a, b = random_nilpotent(rng, n), random_nilpotent(rng, n)
    assert bch_general(a, b, commutator, n) == bch_reference(a, b)


@pytest.mark.parametrize("k", [1, 2, 3])
@given(seed=seeds)
def test_bch_is_a_homomorphism(k, seed):
    rng = rng_of(seed)
    L = CURVES[k].log_charts[rng.choice(CHART_NAMES)]
    theta, xi = sampling.log_derivation(L, rng), sampling.log_derivation(L, rng)
    lhs = exp_derivation(bch(theta, xi))
    rhs = exp_derivation(theta).compose(exp_derivation(xi))
    assert lhs == rhs


def test_bch_depth_guard():
    dd = twist(3)
    with pytest.raises(ResourceError, match="need 3"):
        bch(dd, dd, depth=2)


def test_lie_bracket_is_antisymmetric():
    rng = rng_of(9)
    L = vz(3)
    a, b = sampling.log_derivation(L, rng), sampling.log_derivation(L, rng)
    assert lie_bracket(a, b) == -lie_bracket(b, a)


# gauge transforms -------------------------------------------------------------------------

def test_gauge_exp_of_zero():
    P = vz(2).pchart
    x = P.function(P.ring.var("x"))
    assert gauge_exp(P.zero(-1), x) == x


def test_gauge_exp_of_base_times_generator():
    P = vz(1).pchart
    R = P.ring
    x = R.var("x")
    assert gauge_exp(P.gen(0, R.base(0)), P.function(x)) == P.function((R.one() - R.base(0)) * x)


@pytest.mark.parametrize("k", [2, 3])
@given(seed=seeds)
def test_gauge_exp_composes_by_bch(k, seed):
    rng = rng_of(seed)
    P = CURVES[k].log_charts[rng.choice(CHART_NAMES)].pchart
    theta = sampling.gerst(P, -1, rng, min_order=1)
    xi = sampling.gerst(P, -1, rng, min_order=1)
    x = sampling.gerst(P, -rng.randint(0, P.dim), rng)
    assert gauge_exp(theta, gauge_exp(xi, x)) == gauge_exp(gerst_bch(theta, xi), x)


@given(seed=seeds)
def test_derivation_polyvector_roundtrip(seed):
    rng = rng_of(seed)
    L = CURVES[2].log_charts[rng.choice(CHART_NAMES)]
    dd = sampling.log_derivation(L, rng)
    assert gerst_to_derivation(L, derivation_to_gerst(dd)) == dd


def test_auto_gauge_on_the_twist():
    P = vz(2).pchart
    theta = LogDerivation(vz(2), *_gen_values(P, P.ring.base(0)))
    rep = verify_auto_gauge(exp_derivation(theta))
    assert rep["passed"], rep["failures"]


def _gen_values(P, c):
    g = P.generators[0]
    return [c * a for a in g.action], [c * a for a in g.logpart]


@pytest.mark.parametrize("name", CHART_NAMES)
@given(seed=seeds)
def test_auto_gauge_on_random_automorphisms(name, seed):
    L = CURVES[2].log_charts[name]
    rep = verify_auto_gauge(sampling.log_automorphism(L, rng_of(seed)))
    assert rep["passed"], rep["failures"]
