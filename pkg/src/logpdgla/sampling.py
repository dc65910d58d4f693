"""Seeded random generators for the property suites.

Everything takes a :class:`random.Random` so a single seed determines a run.
Coefficients are small rationals; monomials are small exponent vectors.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

from . import apl
from .apl import APLForm
from .exactalg import PolyElement
from .gerst import GerstElement
from .logdef import LogAutomorphism, gerst_to_derivation
from .tw import complete


def coeff(rng):
    num = rng.choice([-3, -2, -1, 1, 2, 3])
    return Fraction(num, rng.choice([1, 1, 2, 3]))


def poly(ring, rng, nterms=3, maxdeg=2, min_order=0):
    """A random element of ``I^min_order`` (nonzero unless truncation kills it)."""
    terms = {}
    base = ring.base(0) ** min_order if min_order and ring.rank else ring.one()
    for _ in range(nterms):
        m = tuple(rng.randint(-maxdeg, maxdeg) if inv else rng.randint(0, maxdeg)
                  for inv in ring.invertible)
        terms[m] = terms.get(m, 0) + coeff(rng)
    return PolyElement(ring, terms) * base


def ideal_poly(ring, rng, nterms=3, maxdeg=2):
    """A random nonzero element of the base ideal, or zero if the ring is reduced."""
    if ring.order == 0:
        return ring.zero()
    for _ in range(20):
        x = poly(ring, rng, nterms, maxdeg, min_order=1)
        if x:
            return x
    return ring.base(0)


def gerst(chart, degree, rng, nterms=2, maxdeg=2, min_order=0):
    """A random element of ``G^degree`` with coefficients in ``I^min_order``."""
    r = chart.dim
    if degree > 0 or -degree > r:
        return chart.zero(degree)
    wedges = list(itertools.combinations(range(r), -degree))
    terms = {}
    for _ in range(nterms):
        w = rng.choice(wedges)
        c = poly(chart.ring, rng, 2, maxdeg, min_order)
        terms[w] = terms[w] + c if w in terms else c
    return GerstElement(chart, degree, terms)


def form(n, q, rng, nterms=2, maxdeg=2):
    if q > n:
        return APLForm.zero(n, q)
    dts = list(itertools.combinations(range(n), q))
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(0, maxdeg) for _ in range(n))
        key = (e, rng.choice(dts))
        terms[key] = terms.get(key, 0) + coeff(rng)
    return APLForm(n, q, terms)


def compatible_faces(n, q, rng, maxdeg=2):
    """A compatible tuple of face forms on ``Delta^n``: the faces of a random form."""
    x = form(n, q, rng, 3, maxdeg)
    return [apl.apl_face(x, k) for k in range(n + 1)], x


def tw_element(nerve, p, q, rng, min_order=0, density=0.7, nterms=2, maxdeg=2):
    """A random valid element of ``TW^{p,q}``.

    Vertex components are random; higher simplices get the canonical
    extension of their face data plus a random term ``bump ^ a (x) v`` that
    vanishes on every face.  ``nterms`` and ``maxdeg`` bound the random
    polyvector parts.
    """
    def extra(s):
        n = len(s) - 1
        if q > n or rng.random() > density:
            return {}
        ch = nerve.charts[s]
        v = gerst(ch, p, rng, nterms, maxdeg, min_order)
        a = apl.apl_wedge(apl.bump(n), form(n, q, rng, 2, 1)) if n else form(n, q, rng, 1, 0)
        out = {}
        for key, c in a.terms.items():
            t = v.scale(c)
            if t:
                out[key] = out[key] + t if key in out else t
        return out

    return complete(nerve, p, q, {}, extra)


def nilpotent_tw(nerve, p, q, rng, **kw):
    return tw_element(nerve, p, q, rng, min_order=1, **kw)


def log_derivation(lchart, rng, nterms=2):
    """A random nilpotent log derivation (a vector field with ideal coefficients)."""
    x = gerst(lchart.pchart, -1, rng, nterms, 2, min_order=1)
    return gerst_to_derivation(lchart, x)


def log_automorphism(lchart, rng):
    """A random infinitesimal log automorphism built without the exponential.

    Monoid generators get units ``1 + r`` constrained to fix the base;
    other invertible variables are rescaled by a unit.  Requires each
    monoid generator to be a single variable and one base generator with a
    coefficient-one entry.
    """
    R = lchart.ring
    ideal = lambda: ideal_poly(R, rng, 2, 1)
    units = [R.one() + ideal() for _ in range(lchart.rank)]
    (b,) = lchart.base_inclusion
    pivot = next(i for i, e in enumerate(b) if e == 1)
    prod = R.one()
    for i, e in enumerate(b):
        if i != pivot:
            prod = prod * units[i] ** e
    units[pivot] = prod.inverse()
    phi = list(R.gens())
    mono_vars = {}
    for i, a in enumerate(lchart.alpha):
        idx = [j for j, e in enumerate(a) if e]
        if len(idx) != 1 or a[idx[0]] != 1:
            raise ValueError("monoid generators must be variables")
        mono_vars[idx[0]] = i
    for j, v in enumerate(R.gens()):
        if j in mono_vars:
            phi[j] = units[mono_vars[j]] * v
        elif R.invertible[j]:
            phi[j] = (R.one() + ideal()) * v
    aut = LogAutomorphism(lchart, phi, units)
    bad = aut.violations()
    if bad:
        raise AssertionError("; ".join(bad))
    return aut
