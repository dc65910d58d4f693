"""Predifferential graded Lie algebras on Thom-Whitney data.

``L^j = TW^{-1,j}`` with the Thom-Whitney bracket and the predifferential
``d = d_TW + [offset, -]``; ``ell`` in ``TW^{-1,2}`` is the unique element with
``d^2 = [ell, -]``.  Only finite truncations are represented.
"""
from __future__ import annotations

from fractions import Fraction

from .gerst import OutsideSpanError, express_in_basis, vector_field
from .logdef import bch_general, exp_ad
from .tw import (TWElement, localized_element, pure, tw_bracket, tw_d, tw_validate)
from .apl import APLForm


class ResourceError(RuntimeError):
    pass


class InvariantViolation(AssertionError):
    pass


class PDGLA:
    """``(L, [-,-], d, ell)`` over a cover nerve.

    ``offset`` is an element of ``TW^{-1,1}`` (``None`` for the plain
    Thom-Whitney differential).  ``ell`` is computed by :func:`find_ell` when
    not given.
    """

    def __init__(self, nerve, offset=None, ell=None):
        self.nerve = nerve
        if offset is not None and (offset.p, offset.q) != (-1, 1):
            raise ValueError("offset must have bidegree (-1, 1)")
        self.offset = offset
        self.ell = find_ell(self) if ell is None else ell

    @property
    def order(self):
        return self.nerve.order

    def d(self, x):
        out = tw_d(x)
        if self.offset is not None and self.offset:
            out = out + tw_bracket(self.offset, x)
        return out

    def bracket(self, x, y):
        return tw_bracket(x, y)

    def zero(self, j):
        return TWElement.zero(self.nerve, -1, j)

    def twisted(self, eta):
        """The pdgla with predifferential ``d + [eta, -]`` (ell recomputed)."""
        off = eta if self.offset is None else self.offset + eta
        return PDGLA(self.nerve, off)

    def truncated(self, k):
        off = None if self.offset is None else self.offset.truncate(k)
        return PDGLA(self.nerve.truncated(k), off, self.ell.truncate(k))


def find_ell(L):
    """The element ``ell`` with ``d^2 = [ell, -]``.

    On each simplex of dimension at least two, ``d^2(1 (x) f)`` is evaluated
    for every ring variable ``f``; since ``[w (x) theta, 1 (x) f] = -w (x) theta(f)``
    the coefficient of each form monomial ``w`` is a derivation, which is
    expressed in the generator basis by an exact linear solve.
    """
    nerve = L.nerve
    comps = {}
    for s in nerve.simplices:
        n = len(s) - 1
        if n < 2:
            continue
        ch = nerve.charts[s]
        one = APLForm.const(n)
        values = {}  # form monomial -> list of values per variable
        for vi, f in enumerate(ch.ring.gens()):
            x = pure(nerve, s, one, ch.function(f))
            y = L.d(L.d(x)).component(s)
            for key, v in y.items():
                values.setdefault(key, [ch.ring.zero()] * ch.ring.nvars)[vi] = -v.terms.get((), ch.ring.zero())
        comp = {}
        for key, vals in values.items():
            try:
                coeffs = express_in_basis(ch, vals)
            except OutsideSpanError:
                raise InvariantViolation(f"d^2 is not a bracket operator on {s}") from None
            theta = vector_field(ch, coeffs)
            if theta:
                comp[key] = theta
        if comp:
            comps[s] = comp
    ell = TWElement(nerve, -1, 2, comps)
    rep = tw_validate(ell)
    if not rep["valid"]:
        raise InvariantViolation(f"computed ell is not a valid element: {rep['witness']}")
    return ell


def mc_residual(L, eta):
    if (eta.p, eta.q) != (-1, 1):
        raise ValueError("eta must lie in L^1")
    o = eta.coefficient_order()
    if o is not None and o < 1:
        raise ValueError("eta must have coefficients in the base ideal")
    return L.d(eta) + tw_bracket(eta, eta).scale(Fraction(1, 2)) + L.ell


def _T(L, theta, y):
    """``(exp(ad theta) - 1)/ad theta`` applied to ``y``."""
    total = y
    term = y
    for n in range(1, L.order + 3):
        term = tw_bracket(theta, term).scale(Fraction(1, n + 1))
        if not term:
            return total
        total = total + term
    raise ValueError("gauge series did not terminate")


def exp_theta(L, theta, x):
    if (theta.p, theta.q) != (-1, 0):
        raise ValueError("theta must lie in L^0")
    o = theta.coefficient_order()
    if o is not None and o < 1:
        raise ValueError("theta must have coefficients in the base ideal")
    return exp_ad(theta, x, tw_bracket, L.order + 2)


def gauge_action(L, theta, eta):
    """``exp_theta(eta) - T([theta, -])(d theta)``."""
    return exp_theta(L, theta, eta) - _T(L, theta, L.d(theta))


def kappa_of(L, theta):
    """Correction term ``T([theta, -])(d theta)`` of the conjugation by ``exp_theta``."""
    return _T(L, theta, L.d(theta))


def gauge_equivalent(L, eta, eta2, theta):
    """Whether ``d_eta o exp_theta = exp_theta o d_eta2``, i.e. ``gauge_action(theta, eta2) = eta``."""
    image = gauge_action(L, theta, eta2)
    ok = image == eta
    return ok, {"theta": theta, "image": image, "difference": None if ok else eta - image}


def pdgla_bch(L, theta, xi):
    return bch_general(theta, xi, tw_bracket, L.order + 1)


def validate_pdgla(L, samples):
    """Derivation law, Jacobi, ``d^2 = [ell, -]`` and nilpotency of ``ell`` on samples."""
    n = 0
    o = L.ell.coefficient_order()
    if o is not None and o < 1:
        return {"passed": False, "cases": 0, "witness": "ell does not have coefficients in the base ideal"}
    for x in samples:
        n += 1
        if L.d(L.d(x)) != tw_bracket(L.ell, x):
            return {"passed": False, "cases": n, "witness": f"d^2 != [ell, -] on {x}"}
    for x in samples:
        for y in samples[:4]:
            lhs = L.d(tw_bracket(x, y))
            rhs = tw_bracket(L.d(x), y) + tw_bracket(x, L.d(y)).scale((-1) ** (x.degree + 1))
            if lhs != rhs:
                return {"passed": False, "cases": n, "witness": f"derivation law fails on {x}, {y}"}
            for z in samples[:3]:
                a, b = x.degree, y.degree
                lhs = tw_bracket(x, tw_bracket(y, z))
                rhs = tw_bracket(tw_bracket(x, y), z) + tw_bracket(y, tw_bracket(x, z)).scale((-1) ** ((a + 1) * (b + 1)))
                if lhs != rhs:
                    return {"passed": False, "cases": n, "witness": f"Jacobi fails on {x}, {y}, {z}"}
    return {"passed": True, "cases": n, "witness": None}


class PDGLAHom:
    """A pdgla map: componentwise ``psi`` plus the correction ``kappa`` in ``M^1``."""

    def __init__(self, source, target, psi, kappa=None):
        self.source = source
        self.target = target
        self.psi = psi
        self.kappa = kappa if kappa is not None else target.zero(1)


def validate_hom(h, samples):
    M, Lsrc, psi, k = h.target, h.source, h.psi, h.kappa
    for x in samples:
        lhs = M.d(psi(x)) - psi(Lsrc.d(x))
        rhs = tw_bracket(k, psi(x))
        if lhs != rhs:
            return {"passed": False, "witness": f"d_M psi - psi d_L != [kappa, psi(-)] on {x}"}
    lhs = psi(Lsrc.ell)
    rhs = M.ell - M.d(k) + tw_bracket(k, k).scale(Fraction(1, 2))
    if lhs != rhs:
        return {"passed": False, "witness": "psi(ell_L) != ell_M - d_M kappa + 1/2 [kappa, kappa]"}
    return {"passed": True, "witness": None}


def def_map(h, eta):
    """``psi(eta) - kappa``; Maurer-Cartan elements go to Maurer-Cartan elements."""
    out = h.psi(eta) - h.kappa
    if not mc_residual(h.source, eta) and mc_residual(h.target, out):
        raise InvariantViolation("def_map sent a Maurer-Cartan element to a non-solution")
    return out


def operator_samples(L, rng=None, count=10, random_element=None):
    """Default sample set: localized variables and generators per simplex, plus random elements."""
    nerve = L.nerve
    out = []
    for s in nerve.simplices:
        ch = nerve.charts[s]
        for f in ch.ring.gens():
            out.append(localized_element(nerve, s, ch.function(f)))
        for i in range(ch.dim):
            out.append(localized_element(nerve, s, ch.gen(i)))
    if random_element is not None and rng is not None:
        for _ in range(count):
            out.append(random_element(rng))
    return out
