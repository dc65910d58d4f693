from fractions import Fraction

import pytest
from hypothesis import given, settings

from logpdgla import sampling
from logpdgla.apl import APLForm
from logpdgla.curve import build_curve, curve_pdgla, global_d
from logpdgla.pdgla import (PDGLA, PDGLAHom, def_map, exp_theta, find_ell, gauge_action, gauge_equivalent,
                            kappa_of, mc_residual, operator_samples, pdgla_bch, validate_hom, validate_pdgla)
from logpdgla.toy import triangle_nerve, two_chart_nerve
from logpdgla.tw import TWElement, pure, tw_bracket, tw_d
from strategies import rng_of, seeds

HALF = Fraction(1, 2)
TRIANGLE = {k: triangle_nerve(k) for k in (1, 2)}
PLAIN = {k: PDGLA(n) for k, n in TRIANGLE.items()}
SMALL = {"nterms": 1, "maxdeg": 1}


def test_plain_nerves_have_zero_ell():
    assert not curve_pdgla(build_curve(2)).ell
    assert not PDGLA(two_chart_nerve(2)).ell
    assert not PLAIN[2].ell


def test_plain_pdgla_is_a_dgla_on_samples():
    L = PLAIN[1]
    rep = validate_pdgla(L, operator_samples(L))
    assert rep["passed"], rep["witness"]


def test_offset_must_be_a_one_form():
    with pytest.raises(ValueError):
        PDGLA(TRIANGLE[1], TWElement.zero(TRIANGLE[1], -1, 0))


@settings(max_examples=10)
@given(seeds)
def test_ell_of_a_twist(seed):
    rng = rng_of(seed)
    L = PLAIN[rng.choice([1, 2])]
    eta = sampling.nilpotent_tw(L.nerve, -1, 1, rng)
    M = L.twisted(eta)
    assert M.ell == tw_d(eta) + tw_bracket(eta, eta).scale(HALF)
    assert M.ell == mc_residual(L, eta)
    rep = validate_pdgla(M, operator_samples(M)[:8])
    assert rep["passed"], rep["witness"]


def test_find_ell_is_idempotent_on_recomputation():
    rng = rng_of(2)
    L = PLAIN[2]
    M = L.twisted(sampling.nilpotent_tw(L.nerve, -1, 1, rng))
    assert find_ell(M) == M.ell


def test_residual_needs_nilpotent_one_forms():
    L = curve_pdgla(build_curve(1))
    with pytest.raises(ValueError):
        mc_residual(L, TWElement.zero(L.nerve, -1, 0))
    e = ("x", "y")
    unit_coeff = pure(L.nerve, e, APLForm.dt(1, 0), L.nerve.charts[e].gen(0))
    with pytest.raises(ValueError, match="base ideal"):
        mc_residual(L, unit_coeff)


def test_gauge_by_zero_is_trivial():
    L = PLAIN[1]
    eta = sampling.nilpotent_tw(L.nerve, -1, 1, rng_of(3))
    zero = L.zero(0)
    assert gauge_action(L, zero, eta) == eta
    ok, info = gauge_equivalent(L, eta, eta, zero)
    assert ok and info["difference"] is None


def test_theta_must_be_nilpotent():
    cv = build_curve(1)
    L = curve_pdgla(cv)
    with pytest.raises(ValueError):
        exp_theta(L, global_d(cv), L.zero(1))


@settings(max_examples=10)
@given(seeds)
def test_gauge_orbit_relations(seed):
    rng = rng_of(seed)
    L = PLAIN[1]
    theta = sampling.nilpotent_tw(L.nerve, -1, 0, rng, **SMALL)
    eta = sampling.nilpotent_tw(L.nerve, -1, 1, rng, **SMALL)
    new = gauge_action(L, theta, eta)
    assert gauge_equivalent(L, new, eta, theta)[0]
    assert mc_residual(L, new) == exp_theta(L, theta, mc_residual(L, eta))
    assert gauge_action(L, theta.scale(-1), new) == eta
    assert new == exp_theta(L, theta, eta) - kappa_of(L, theta)


def test_non_equivalence_is_reported():
    L = PLAIN[1]
    rng = rng_of(4)
    eta = sampling.nilpotent_tw(L.nerve, -1, 1, rng)
    delta = sampling.nilpotent_tw(L.nerve, -1, 1, rng)
    assert delta
    ok, info = gauge_equivalent(L, eta + delta, eta, L.zero(0))
    assert not ok and info["difference"] == delta


@settings(max_examples=5)
@given(seeds)
def test_bch_in_the_gauge_group(seed):
    rng = rng_of(seed)
    L = PLAIN[1]
    theta, xi = (sampling.nilpotent_tw(L.nerve, -1, 0, rng, **SMALL) for _ in range(2))
    eta = sampling.nilpotent_tw(L.nerve, -1, 1, rng, **SMALL)
    assert gauge_action(L, theta, gauge_action(L, xi, eta)) == gauge_action(L, pdgla_bch(L, theta, xi), eta)


# homomorphisms ----------------------------------------------------------------------------

def test_identity_and_base_change_homs():
    L = PLAIN[2]
    args = operator_samples(L)[:10]
    assert validate_hom(PDGLAHom(L, L, lambda x: x), args)["passed"]
    low = L.truncated(1)
    assert validate_hom(PDGLAHom(L, low, lambda x: x.truncate(1)), args)["passed"]


def test_conjugation_hom_carries_kappa():
    L = PLAIN[1]
    rng = rng_of(6)
    theta = sampling.nilpotent_tw(L.nerve, -1, 0, rng, **SMALL)
    eta = sampling.nilpotent_tw(L.nerve, -1, 1, rng, **SMALL)
    h = PDGLAHom(L, L, lambda x: exp_theta(L, theta, x), kappa_of(L, theta))
    assert validate_hom(h, operator_samples(L)[:8])["passed"]
    assert def_map(h, eta) == gauge_action(L, theta, eta)


def test_hom_without_kappa_fails_when_theta_is_not_closed():
    L = PLAIN[1]
    rng = rng_of(8)
    for _ in range(10):
        theta = sampling.nilpotent_tw(L.nerve, -1, 0, rng, **SMALL)
        if kappa_of(L, theta):
            break
    assert kappa_of(L, theta)
    h = PDGLAHom(L, L, lambda x: exp_theta(L, theta, x))
    rep = validate_hom(h, operator_samples(L))
    assert not rep["passed"] and rep["witness"]
