"""Seeded property suites, numbered 2 to 9 as in ``logpdgla check --criteria``.

Each suite takes a :class:`random.Random` and returns a list of
:class:`PropertyResult`.  Sample counts default to the required minimums and
can be raised with ``samples``.  ``mutate`` injects a known fault so that the
suites can be seen to fail: ``"bracket"`` corrupts the bracket table of the
torus chart and ``"ell"`` perturbs the computed curvature element.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import apl, oracles, sampling, toy
from .curve import build_curve
from .gerst import check_gerstenhaber_axioms, g_bracket
from .logdef import (bch, bch_general, exp_derivation, log_automorphism, transport_by_automorphism,
                     verify_auto_gauge)
from .pdgla import (PDGLA, PDGLAHom, def_map, exp_theta, gauge_action, kappa_of, mc_residual,
                    operator_samples, pdgla_bch, validate_hom)
from .signs import koszul
from .tw import (is_valid, pure, tw_bracket, tw_d, tw_minus_one_nonzero, tw_wedge)

MUTATIONS = ("bracket", "ell")


@dataclass
class PropertyResult:
    criterion: int
    name: str
    passed: bool
    cases: int
    witness: str | None = None

    @property
    def case_id(self):
        return f"{self.criterion}:{self.name}"

    def to_json(self):
        return {"criterion": self.criterion, "name": self.name, "passed": self.passed,
                "cases": self.cases, "witness": self.witness}


class _Tally:
    """Counts cases and keeps the first failure."""

    def __init__(self, criterion, name):
        self.criterion, self.name = criterion, name
        self.cases = 0
        self.witness = None

    def case(self, ok, witness=None):
        self.cases += 1
        if not ok and self.witness is None:
            self.witness = witness() if callable(witness) else (witness or "check failed")

    def result(self):
        return PropertyResult(self.criterion, self.name, self.witness is None, self.cases, self.witness)


def suite_rng(seed, criterion):
    return random.Random(f"{seed}:{criterion}")


def _short(x, limit=300):
    s = str(x)
    return s if len(s) <= limit else s[:limit] + "..."


# cached geometry ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def curve(k):
    return build_curve(k)


@lru_cache(maxsize=None)
def triangle(k):
    return toy.triangle_nerve(k)


@lru_cache(maxsize=None)
def two_chart(k):
    return toy.two_chart_nerve(k)


def curve_log_charts(k):
    inst = curve(k)
    return [(str(s), inst.log_charts[s]) for s in [("x",), ("y",), ("z",)] + list(inst.edge_charts)]


@lru_cache(maxsize=None)
def torus(k, mutate=False):
    ch = toy.torus_chart(k)
    if mutate:
        R = ch.ring
        ch = ch.with_lie({(0, 1): (R.zero(), R.const(2))})
    return ch


def torus_log(k):
    return toy.log_chart(torus(k))


def _charts_for_logdef(k):
    return curve_log_charts(k) + [("T", torus_log(k))]


# criterion 2 -----------------------------------------------------------------------------

def suite_exp_log(rng, samples=None, mutate=None):
    n = samples or 100
    out = []
    for label in ["('x',)", "('y',)", "('z',)", "('x', 'y')", "('y', 'z')", "('x', 'z')", "T"]:
        t1 = _Tally(2, f"log(exp(D)) = D on {label}")
        t2 = _Tally(2, f"exp(log(phi)) = phi on {label}")
        for i in range(n):
            k = 1 + i % 3
            lc = dict(_charts_for_logdef(k))[label]
            D = sampling.log_derivation(lc, rng)
            e = exp_derivation(D)
            back = log_automorphism(e)
            t1.case(back == D and not e.violations(), lambda: f"D = {D}, log(exp(D)) = {back}")
            aut = sampling.log_automorphism(lc, rng)
            lg = log_automorphism(aut)
            again = exp_derivation(lg)
            t2.case(again == aut and not lg.violations(), lambda: f"phi = {aut}, exp(log(phi)) = {again}")
        out += [t1.result(), t2.result()]
    return out


# criterion 3 -----------------------------------------------------------------------------

def suite_bch(rng, samples=None, mutate=None):
    n = samples or 50
    out = []
    for label in ["('x',)", "('y',)", "('z',)", "('x', 'y')", "('y', 'z')", "('x', 'z')", "T"]:
        t = _Tally(3, f"exp(theta * xi) = exp(theta) o exp(xi) on {label}")
        for i in range(n):
            k = 1 + i % 3
            lc = dict(_charts_for_logdef(k))[label]
            a = sampling.log_derivation(lc, rng)
            b = sampling.log_derivation(lc, rng)
            lhs = exp_derivation(bch(a, b))
            rhs = exp_derivation(a).compose(exp_derivation(b))
            t.case(lhs == rhs, lambda: f"theta = {a}, xi = {b}: {lhs} != {rhs}")
        out.append(t.result())
    t = _Tally(3, "BCH series against nilpotent matrices")
    for _ in range(n):
        size = rng.randint(2, 5)
        a, b = oracles.random_nilpotent(rng, size), oracles.random_nilpotent(rng, size)
        got = bch_general(a, b, oracles.commutator, size)
        t.case(got == oracles.bch_reference(a, b), lambda: f"matrices {a.rows}, {b.rows}")
    out.append(t.result())
    return out


# criterion 4 -----------------------------------------------------------------------------

def _random_triple(ch, rng):
    return tuple(sampling.gerst(ch, -rng.randint(0, ch.dim), rng) for _ in range(3))


def suite_gerstenhaber(rng, samples=None, mutate=None):
    n = samples or 100
    k = 2
    inst = curve(k)
    charts = [(c.name, c) for c in list(inst.vertex_charts.values()) + list(inst.edge_charts.values())]
    charts.append(("T", torus(k, mutate == "bracket")))
    out = []
    for label, ch in charts:
        triples = [_random_triple(ch, rng) for _ in range(n)]
        rep = check_gerstenhaber_axioms(triples)
        out.append(PropertyResult(4, f"Gerstenhaber axioms on {label}", rep["passed"], rep["cases"],
                                  rep["witness"] and _short(rep["witness"])))
        t = _Tally(4, f"bracket = signed Schouten-Nijenhuis on {label}")
        for x, y, z in triples:
            for a, b in ((x, y), (y, z)):
                bad = oracles.bracket_matches_schouten(g_bracket, a, b)
                t.case(bad is None, lambda: _short(f"{a}, {b}: {bad}"))
        out.append(t.result())
        probs = ch.check_tables()
        out.append(PropertyResult(4, f"bracket table of {label}", not probs, 1, probs[0] if probs else None))
    return out


# criterion 5 -----------------------------------------------------------------------------

def suite_auto_gauge(rng, samples=None, mutate=None):
    n = samples or 20
    out = []
    for label in ["('x',)", "('y',)", "('z',)", "('x', 'y')", "('y', 'z')", "('x', 'z')", "T"]:
        t = _Tally(5, f"T_phi = exp(-log phi) on degrees 0 and -1 on {label}")
        tc = _Tally(5, f"T_(phi psi) = T_phi T_psi on {label}")
        for i in range(n):
            k = 1 + i % 2
            lc = dict(_charts_for_logdef(k))[label]
            aut = sampling.log_automorphism(lc, rng)
            rep = verify_auto_gauge(aut)
            t.case(rep["passed"], lambda: _short(rep["failures"][0]))
            other = sampling.log_automorphism(lc, rng)
            pc = lc.pchart
            for x in [pc.gen(j) for j in range(pc.dim)]:
                lhs = transport_by_automorphism(aut.compose(other), x)
                rhs = transport_by_automorphism(aut, transport_by_automorphism(other, x))
                tc.case(lhs == rhs, lambda: _short(f"{aut}, {other} on {x}"))
        out += [t.result(), tc.result()]
    return out


# criterion 6 -----------------------------------------------------------------------------

def _bidegrees(rng):
    return rng.choice([(0, 0), (-1, 0), (0, 1), (-1, 1)])


def suite_tw(rng, samples=None, mutate=None):
    n = samples or 100
    names = ["validity closure", "d^2 = 0", "Leibniz laws for d", "Gerstenhaber axioms in total degree",
             "base change commutes with the operations"]
    tallies = {nm: _Tally(6, nm) for nm in names}
    for i in range(n):
        k = 1 + i % 2
        nerve = curve(k).nerve if i % 2 == 0 else triangle(k)
        x, y, z = (sampling.tw_element(nerve, *_bidegrees(rng), rng) for _ in range(3))
        a, b = x.degree, y.degree
        dx, dy = tw_d(x), tw_d(y)
        xy_w, xy_b = tw_wedge(x, y), tw_bracket(x, y)
        ok = all(is_valid(e) for e in (dx, xy_w, xy_b))
        tallies["validity closure"].case(ok, lambda: _short(f"on {nerve.name}: {x}, {y}"))
        tallies["d^2 = 0"].case(not tw_d(dx), lambda: _short(f"{x}"))
        lw = tw_d(xy_w) == tw_wedge(dx, y) + tw_wedge(x, dy).scale((-1) ** (a % 2))
        lb = tw_d(xy_b) == tw_bracket(dx, y) + tw_bracket(x, dy).scale((-1) ** ((a + 1) % 2))
        tallies["Leibniz laws for d"].case(lw and lb, lambda: _short(f"wedge ok={lw}, bracket ok={lb} on {x}, {y}"))
        checks = [
            tw_wedge(x, y) == tw_wedge(y, x).scale(koszul(a, b)),
            tw_wedge(tw_wedge(x, y), z) == tw_wedge(x, tw_wedge(y, z)),
            tw_bracket(x, tw_wedge(y, z)) == tw_wedge(xy_b, z) + tw_wedge(y, tw_bracket(x, z)).scale(koszul(a + 1, b)),
            xy_b == tw_bracket(y, x).scale(-koszul(a + 1, b + 1)),
            tw_bracket(x, tw_bracket(y, z)) == tw_bracket(xy_b, z) + tw_bracket(y, tw_bracket(x, z)).scale(koszul(a + 1, b + 1)),
        ]
        tallies["Gerstenhaber axioms in total degree"].case(all(checks), lambda: _short(f"axioms {checks} on {x}, {y}, {z}"))
        kk = k - 1
        tx, ty = x.truncate(kk), y.truncate(kk)
        bc = (is_valid(tx) and tw_wedge(tx, ty) == xy_w.truncate(kk) and tw_bracket(tx, ty) == xy_b.truncate(kk)
              and tw_d(tx) == dx.truncate(kk))
        tallies["base change commutes with the operations"].case(bc, lambda: _short(f"{x}, {y}"))
    return [t.result() for t in tallies.values()]


# criterion 7 -----------------------------------------------------------------------------

def suite_apl(rng, samples=None, mutate=None):
    n = samples or 50
    out = []
    for dim in (1, 2):
        t = _Tally(7, f"apl_extend restricts to its faces on Delta^{dim}")
        for _ in range(n):
            q = rng.randint(0, dim)
            faces, _src = sampling.compatible_faces(dim, q, rng)
            ext = apl.apl_extend(faces)
            ok = all(apl.apl_face(ext, j) == f for j, f in enumerate(faces))
            t.case(ok, lambda: f"faces {faces} extended to {ext}")
        out.append(t.result())
    t = _Tally(7, "Stokes: int d w = sum (-1)^k int face_k w")
    to = _Tally(7, "apl_integrate against iterated integration")
    for _ in range(n):
        dim = rng.randint(1, 3)
        w = sampling.form(dim, dim - 1, rng, 3, 3)
        lhs = apl.apl_integrate(apl.apl_d(w))
        rhs = sum((-1) ** j * apl.apl_integrate(apl.apl_face(w, j)) for j in range(dim + 1))
        t.case(lhs == rhs, lambda: f"{w}: {lhs} != {rhs}")
        top = sampling.form(dim, dim, rng, 3, 3)
        got, want = apl.apl_integrate(top), oracles.integrate_form(top)
        to.case(got == want, lambda: f"{top}: {got} != {want}")
    out += [t.result(), to.result()]
    t = _Tally(7, "d^2 = 0 and faces commute with d on forms")
    for _ in range(n):
        dim = rng.randint(1, 3)
        w = sampling.form(dim, rng.randint(0, dim), rng, 3, 3)
        ok = not apl.apl_d(apl.apl_d(w)) and all(apl.apl_face(apl.apl_d(w), j) == apl.apl_d(apl.apl_face(w, j))
                                                   for j in range(dim + 1))
        t.case(ok, lambda: f"{w}")
    out.append(t.result())
    return out


# criterion 8 -----------------------------------------------------------------------------

def _pick(rng, seq, m):
    seq = list(seq)
    return seq if len(seq) <= m else rng.sample(seq, m)


@lru_cache(maxsize=None)
def _plain(nerve_kind, k):
    nerve = curve(k).nerve if nerve_kind == "curve" else triangle(k)
    L = PDGLA(nerve)
    return L, tuple(operator_samples(L))


def suite_gauge(rng, samples=None, mutate=None):
    n = samples or 50
    names = ["conjugation identity exp_theta d_eta exp_-theta = d_eta'",
             "MC residual transforms by exp_theta", "gauge action is a group action",
             "exp_theta-conjugation is a pdgla homomorphism with kappa = T(ad theta)(d theta)",
             "identity and base-change homomorphisms", "faithfulness of [-, -] on L",
             "base change commutes with the residual"]
    tallies = {nm: _Tally(8, nm) for nm in names}
    # exp_theta runs to full nilpotency length, so keep the random data small
    small = {"nterms": 1, "maxdeg": 1}
    for i in range(n):
        kind = "triangle" if i % 2 == 0 else "curve"
        k = 1 + i % 3
        L0, base_samples = _plain(kind, k)
        nerve = L0.nerve
        eta = sampling.nilpotent_tw(nerve, -1, 1, rng, **small)
        theta = sampling.nilpotent_tw(nerve, -1, 0, rng, **small)
        L = L0.twisted(eta) if i % 4 < 2 else L0
        eta2 = sampling.nilpotent_tw(nerve, -1, 1, rng, **small)
        args = _pick(rng, base_samples, 7) + [sampling.tw_element(nerve, *_bidegrees(rng), rng, **small) for _ in range(3)]
        new = gauge_action(L, theta, eta2)
        minus = theta.scale(-1)
        ok = True
        for x in args:
            lhs = exp_theta(L, theta, L.d(exp_theta(L, minus, x)) + tw_bracket(eta2, exp_theta(L, minus, x)))
            rhs = L.d(x) + tw_bracket(new, x)
            if lhs != rhs:
                ok = False
                break
        tallies[names[0]].case(ok, lambda: _short(f"theta = {theta}, eta = {eta2}"))
        r_old, r_new = mc_residual(L, eta2), mc_residual(L, new)
        tallies[names[1]].case(r_new == exp_theta(L, theta, r_old), lambda: _short(f"theta = {theta}, eta = {eta2}"))
        if i % 5 == 0:
            xi = sampling.nilpotent_tw(nerve, -1, 0, rng, **small)
            lhs = gauge_action(L, theta, gauge_action(L, xi, eta2))
            rhs = gauge_action(L, pdgla_bch(L, theta, xi), eta2)
            tallies[names[2]].case(lhs == rhs, lambda: _short(f"theta = {theta}, xi = {xi}"))
        if i % 3 == 0:
            h = PDGLAHom(L, L, lambda x: exp_theta(L, theta, x), kappa_of(L, theta))
            rep = validate_hom(h, args)
            dm = def_map(h, eta2) == new
            tallies[names[3]].case(rep["passed"] and dm, lambda: _short(f"{rep['witness']} (def_map agrees: {dm})"))
            ident = PDGLAHom(L, L, lambda x: x)
            Lk = L.truncated(k - 1)
            bc = PDGLAHom(L, Lk, lambda x: x.truncate(k - 1))
            r1, r2 = validate_hom(ident, args), validate_hom(bc, args)
            tallies[names[4]].case(r1["passed"] and r2["passed"], lambda: f"{r1['witness']} / {r2['witness']}")
            tallies[names[6]].case(mc_residual(Lk, eta2.truncate(k - 1)) == r_old.truncate(k - 1),
                                   lambda: _short(f"eta = {eta2}"))
        if theta:
            s, var, x, val = tw_minus_one_nonzero(theta)
            tallies[names[5]].case(bool(val) and is_valid(x), lambda: _short(f"theta = {theta}"))
    return [t.result() for t in tallies.values()]


# criterion 9 -----------------------------------------------------------------------------

def _top_bump(nerve, rng):
    """A nonzero valid element of ``L^2`` supported on a top simplex."""
    top = nerve.of_dim(nerve.dim)[0]
    ch = nerve.charts[top]
    n = len(top) - 1
    form = apl.apl_wedge(apl.bump(n), apl.apl_wedge(apl.APLForm.dt(n, 0), apl.APLForm.dt(n, 1)))
    return pure(nerve, top, form, ch.gen(0, sampling.ideal_poly(ch.ring, rng)))


def _ell(M, mutate):
    """The computed curvature element, corrupted on a top simplex under ``mutate="ell"``."""
    ell = M.ell
    nerve = M.nerve
    if mutate == "ell" and nerve.dim >= 2:
        ell = ell + _top_bump(nerve, random.Random(0))
    return ell


def suite_find_ell(rng, samples=None, mutate=None):
    n = samples or 30
    out = []
    for kind in ("two-chart", "triangle"):
        t = _Tally(9, f"ell(d + [eta, -]) = d eta + 1/2 [eta, eta] + ell(d) on the {kind} nerve")
        tu = _Tally(9, f"uniqueness of ell via (-1)-injectivity on the {kind} nerve")
        ts = _Tally(9, f"(d + [eta, -])^2 = [residual, -] on samples on the {kind} nerve")
        for i in range(n):
            k = 1 + i % 3
            nerve = two_chart(k) if kind == "two-chart" else triangle(k)
            L = PDGLA(nerve)
            eta = sampling.nilpotent_tw(nerve, -1, 1, rng)
            M = L.twisted(eta)
            got = _ell(M, mutate)
            want = tw_d(eta) + tw_bracket(eta, eta).scale(Fraction(1, 2)) + L.ell
            t.case(got == want, lambda: _short(f"eta = {eta}: found {got}, expected {want}"))
            rho = mc_residual(L, eta)
            smp = operator_samples(M, rng, 3, lambda r: sampling.tw_element(nerve, *_bidegrees(r), r))
            ok = all(M.d(M.d(x)) == tw_bracket(rho, x) for x in _pick(rng, smp, 10))
            ts.case(ok, lambda: _short(f"eta = {eta}"))
            # any other candidate differs by a nonzero delta, which some x detects
            if nerve.dim < 2:
                # L^2 = 0 without 2-simplices, so there is nothing to compare against
                tu.case(not sampling.nilpotent_tw(nerve, -1, 2, rng), "nonzero element of L^2 on a 1-dimensional nerve")
                continue
            delta = sampling.nilpotent_tw(nerve, -1, 2, rng) + _top_bump(nerve, rng)
            s, var, x, val = tw_minus_one_nonzero(delta)
            wrong = M.d(M.d(x)) != tw_bracket(got + delta, x)
            tu.case(wrong, lambda: _short(f"ell + {delta} also satisfies d^2 = [ell, -] at {x}"))
        out += [t.result(), tu.result(), ts.result()]
    return out


SUITES = {
    2: ("exp/log roundtrips", suite_exp_log),
    3: ("BCH homomorphism", suite_bch),
    4: ("Gerstenhaber axioms and Schouten-Nijenhuis oracle", suite_gerstenhaber),
    5: ("automorphism transport equals gauge transform", suite_auto_gauge),
    6: ("Thom-Whitney structure", suite_tw),
    7: ("extension operator and Stokes", suite_apl),
    8: ("gauge formula and Maurer-Cartan invariance", suite_gauge),
    9: ("curvature element", suite_find_ell),
}


def run_suites(seed, criteria=None, samples=None, mutate=None):
    """Run the selected suites; results are sorted by case id."""
    if mutate is not None and mutate not in MUTATIONS:
        raise ValueError(f"unknown mutation {mutate!r}")
    criteria = sorted(SUITES) if criteria is None else sorted(criteria)
    results = []
    for c in criteria:
        _, fn = SUITES[c]
        results += fn(suite_rng(seed, c), samples, mutate)
    return sorted(results, key=lambda r: (r.criterion, r.name))
