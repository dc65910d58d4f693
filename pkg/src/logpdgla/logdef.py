"""Log derivations, infinitesimal log automorphisms, and the exp/log pair.

On an affine chart with monoid ``P = N^r`` and ``alpha(e_i)`` a monomial, a
log derivation is a pair ``(D, Delta)`` with ``D(alpha(e_i)) = alpha(e_i) Delta(e_i)``,
and an infinitesimal automorphism is ``(phi, u)`` with
``phi(alpha(e_i)) = u_i alpha(e_i)``.  Both take values in the nilpotent base
ideal ``I``, so every series below is a finite sum.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .exactalg import RingHom, apply_derivation, ideal_membership
from .gerst import (action_of, express_in_basis, g_bracket, g_wedge, vector_field)


class PreconditionError(ValueError):
    pass


class NonNilpotentError(ValueError):
    pass


class ResourceError(RuntimeError):
    pass


def _bch_depth(ring, depth):
    # Z_n lies in F^n, so terms through n = k can survive truncation at order k
    need = max(ring.order, 1)
    if depth is None:
        return need
    if depth < need:
        raise ResourceError(f"BCH depth {depth} is too small at truncation order {ring.order}; need {need}")
    return depth


class LogChart:
    """A polyvector chart together with its monoid chart ``alpha: N^r -> R``.

    ``alpha[i]`` is the exponent tuple of ``alpha(e_i)``; ``base_inclusion[j]``
    is the image of the j-th base monoid generator in ``N^r``.
    """

    def __init__(self, pchart, alpha, base_inclusion):
        self.pchart = pchart
        self.ring = pchart.ring
        self.alpha = tuple(tuple(a) for a in alpha)
        self.base_inclusion = tuple(tuple(b) for b in base_inclusion)
        self.rank = len(self.alpha)
        if len(pchart.monoid) != self.rank:
            raise ValueError("monoid generator names do not match alpha")
        for j, b in enumerate(self.base_inclusion):
            m = self.ring.one()
            for i, a in enumerate(b):
                m = m * self.alpha_elem(i) ** a
            if m != self.ring.base(j):
                raise ValueError(f"alpha of the base generator {j} is {m}, not the base image")

    def alpha_elem(self, i):
        return self.ring.monomial(self.alpha[i])

    def truncated(self, k):
        return LogChart(self.pchart.truncated(k), self.alpha, self.base_inclusion)

    @property
    def name(self):
        return self.pchart.name


class LogDerivation:
    def __init__(self, chart, D, Delta):
        R = chart.ring
        self.chart = chart
        if isinstance(D, dict):
            D = [D.get(v, 0) for v in R.variables]
        if isinstance(Delta, dict):
            Delta = [Delta.get(m, 0) for m in chart.pchart.monoid]
        self.D = tuple(R.element(x) for x in D)
        self.Delta = tuple(R.element(x) for x in Delta)
        if len(self.D) != R.nvars or len(self.Delta) != chart.rank:
            raise ValueError("wrong number of derivation values")

    def __eq__(self, other):
        return isinstance(other, LogDerivation) and self.D == other.D and self.Delta == other.Delta

    def __hash__(self):
        return hash((self.D, self.Delta))

    def __repr__(self):
        R = self.chart.ring
        d = ", ".join(f"D({v})={x}" for v, x in zip(R.variables, self.D))
        l = ", ".join(f"Delta({m})={x}" for m, x in zip(self.chart.pchart.monoid, self.Delta))
        return f"LogDerivation({d}; {l})"

    def __bool__(self):
        return any(self.D) or any(self.Delta)

    def __add__(self, other):
        return LogDerivation(self.chart, [a + b for a, b in zip(self.D, other.D)],
                             [a + b for a, b in zip(self.Delta, other.Delta)])

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return LogDerivation(self.chart, [x.scale(c) for x in self.D], [x.scale(c) for x in self.Delta])

    def __call__(self, x):
        return apply_derivation(self.D, x)

    def violations(self):
        out = []
        ch = self.chart
        for i in range(ch.rank):
            a = ch.alpha_elem(i)
            if self(a) != a * self.Delta[i]:
                out.append(f"D(alpha(e_{i})) != alpha(e_{i}) Delta(e_{i})")
        for j, b in enumerate(ch.base_inclusion):
            s = ch.ring.zero()
            for i, a in enumerate(b):
                s = s + self.Delta[i].scale(a)
            if s:
                out.append(f"Delta does not vanish on base generator {j}")
            if self(ch.ring.base(j)):
                out.append(f"D does not kill base image {j}")
        return out

    def is_nilpotent(self):
        return all(ideal_membership(x, 1) for x in self.D + self.Delta)

    def truncate(self, k):
        ch = self.chart.truncated(k)
        return LogDerivation(ch, [x.truncate(k) for x in self.D], [x.truncate(k) for x in self.Delta])


def lie_bracket(a, b):
    """Commutator of log derivations: ``([D1, D2], D1(Delta2) - D2(Delta1))``."""
    D = [a(y) - b(x) for x, y in zip(a.D, b.D)]
    Delta = [a(y) - b(x) for x, y in zip(a.Delta, b.Delta)]
    return LogDerivation(a.chart, D, Delta)


class LogAutomorphism:
    def __init__(self, chart, phi, units):
        R = chart.ring
        self.chart = chart
        if isinstance(phi, dict):
            phi = [phi.get(v, R.var(v)) for v in R.variables]
        if isinstance(units, dict):
            units = [units.get(m, 1) for m in chart.pchart.monoid]
        self.phi = tuple(R.element(x) for x in phi)
        self.units = tuple(R.element(x) for x in units)
        self.hom = RingHom(R, R, self.phi)

    def __eq__(self, other):
        return isinstance(other, LogAutomorphism) and self.phi == other.phi and self.units == other.units

    def __hash__(self):
        return hash((self.phi, self.units))

    def __repr__(self):
        R = self.chart.ring
        p = ", ".join(f"{v}->{x}" for v, x in zip(R.variables, self.phi))
        u = ", ".join(f"u_{m}={x}" for m, x in zip(self.chart.pchart.monoid, self.units))
        return f"LogAutomorphism({p}; {u})"

    def __call__(self, x):
        return self.hom(x)

    @classmethod
    def identity(cls, chart):
        R = chart.ring
        return cls(chart, R.gens(), [R.one()] * chart.rank)

    def compose(self, other):
        """``self o other``: apply ``other`` first."""
        phi = [self(x) for x in other.phi]
        units = [u * self(v) for u, v in zip(self.units, other.units)]
        return LogAutomorphism(self.chart, phi, units)

    def violations(self):
        out = []
        ch = self.chart
        R = ch.ring
        for v, x in zip(R.gens(), self.phi):
            if not ideal_membership(x - v, 1) and x != v:
                out.append(f"phi({v}) is not the identity modulo I")
        for i, u in enumerate(self.units):
            if u != 1 and not ideal_membership(u - 1, 1):
                out.append(f"u_{i} is not in 1 + I")
            a = ch.alpha_elem(i)
            if self(a) != u * a:
                out.append(f"phi(alpha(e_{i})) != u_{i} alpha(e_{i})")
        for j, b in enumerate(ch.base_inclusion):
            p = R.one()
            for i, a in enumerate(b):
                p = p * self.units[i] ** a
            if p != 1:
                out.append(f"units do not fix base generator {j}")
        return out

    def inverse(self):
        """Inverse by fixed-point iteration ``psi(v) = v - (phi - id)(psi(v))``."""
        R = self.chart.ring
        psi = list(R.gens())
        for _ in range(R.order + 2):
            trial = RingHom(R, R, psi)
            new = [v - (self(p) - p) for v, p in zip(R.gens(), psi)]
            if new == psi:
                break
            psi = new
        units = []
        trial = LogAutomorphism(self.chart, psi, [R.one()] * self.chart.rank)
        for u in self.units:
            # (phi, u) o (psi, w) = id  forces  u * phi(w) = 1  i.e.  w = psi(u)^-1
            units.append(trial(u).inverse())
        return LogAutomorphism(self.chart, psi, units)

    def truncate(self, k):
        ch = self.chart.truncated(k)
        return LogAutomorphism(ch, [x.truncate(k) for x in self.phi], [x.truncate(k) for x in self.units])


def _series_limit(ring):
    return ring.order + 2


def exp_derivation(dd):
    if not dd.is_nilpotent():
        raise PreconditionError("exp needs derivation values in the base ideal")
    R = dd.chart.ring
    lim = _series_limit(R)
    phi = []
    for v in R.gens():
        total, term = v, v
        for n in range(1, lim + 1):
            term = dd(term).scale(Fraction(1, n))
            if not term:
                break
            total = total + term
        else:
            raise NonNilpotentError("exp series did not terminate")
        phi.append(total)
    units = []
    for delta in dd.Delta:
        total = term = R.one()
        for n in range(1, lim + 1):
            term = (delta * term + dd(term)).scale(Fraction(1, n))
            if not term:
                break
            total = total + term
        else:
            raise NonNilpotentError("exp series did not terminate")
        units.append(total)
    return LogAutomorphism(dd.chart, phi, units)


def log_automorphism(aut):
    bad = aut.violations()
    if bad:
        raise PreconditionError("; ".join(bad))
    R = aut.chart.ring
    lim = _series_limit(R)
    D = []
    for v in R.gens():
        total = R.zero()
        chi = v
        for n in range(1, lim + 1):
            chi = aut(chi) - chi
            if not chi:
                break
            total = total + chi.scale(Fraction((-1) ** (n - 1), n))
        else:
            raise NonNilpotentError("log series did not terminate")
        D.append(total)
    Delta = []
    for u in aut.units:
        total = R.zero()
        sigma = R.one()
        for n in range(1, lim + 1):
            sigma = u * aut(sigma) - sigma
            if not sigma:
                break
            total = total + sigma.scale(Fraction((-1) ** (n - 1), n))
        else:
            raise NonNilpotentError("log series did not terminate")
        Delta.append(total)
    return LogDerivation(aut.chart, D, Delta)


def sigma_sequence(aut, i, count):
    """``sigma_0 .. sigma_count`` for the unit ``u_i``."""
    R = aut.chart.ring
    out = [R.one()]
    for _ in range(count):
        out.append(aut.units[i] * aut(out[-1]) - out[-1])
    return out


# Baker-Campbell-Hausdorff ---------------------------------------------------------

def bernoulli(n):
    """Bernoulli number ``B_n`` (``B_1 = -1/2``)."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = Fraction(0)
        for k in range(m):
            s += _binom(m + 1, k) * B[k]
        B.append(-s / (m + 1))
    return B[n]


def _binom(n, k):
    from math import comb
    return comb(n, k)


def _compositions(n, parts):
    if parts == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in _compositions(n - first, parts - 1):
            yield (first,) + rest


def bch_general(x, y, bracket, depth, is_zero=lambda e: not e):
    """``log(exp x exp y)`` through ``depth`` nested brackets.

    Uses the recursion
    ``(n+1) Z_{n+1} = 1/2 [x - y, Z_n]
      + sum_p B_{2p}/(2p)! sum_{k_1+..+k_{2p}=n} [Z_{k_1}, [..., [Z_{k_{2p}}, x + y]]]``
    with ``Z_1 = x + y``.
    """
    Z = {1: x + y}
    total = Z[1]
    diff = x - y
    for n in range(1, depth):
        acc = bracket(diff, Z[n]).scale(Fraction(1, 2))
        for p in range(1, n // 2 + 1):
            K = bernoulli(2 * p) / factorial(2 * p)
            for ks in _compositions(n, 2 * p):
                if any(is_zero(Z[k]) for k in ks):
                    continue
                t = Z[1]
                for k in reversed(ks):
                    t = bracket(Z[k], t)
                acc = acc + t.scale(K)
        Z[n + 1] = acc.scale(Fraction(1, n + 1))
        total = total + Z[n + 1]
    return total


def bch(theta, xi, depth=None):
    """``theta * xi`` with ``exp(theta * xi) = exp(theta) o exp(xi)``."""
    if not (theta.is_nilpotent() and xi.is_nilpotent()):
        raise PreconditionError("BCH needs both arguments in F^1")
    return bch_general(theta, xi, lie_bracket, _bch_depth(theta.chart.ring, depth))


# gauge transforms ---------------------------------------------------------------------

def exp_ad(theta, x, bracket, limit):
    """``sum_k [theta, -]^k (x) / k!``, required to terminate within ``limit`` steps."""
    total = x
    term = x
    for n in range(1, limit + 1):
        term = bracket(theta, term).scale(Fraction(1, n))
        if not term:
            return total
        total = total + term
    raise NonNilpotentError("gauge series did not terminate")


def gauge_exp(theta, x):
    if theta.degree != -1:
        raise ValueError("gauge parameter must have degree -1")
    if any(not ideal_membership(c, 1) for c in theta.terms.values()):
        raise NonNilpotentError("gauge parameter must have coefficients in the base ideal")
    return exp_ad(theta, x, g_bracket, _series_limit(theta.chart.ring))


def gerst_bch(theta, xi, depth=None):
    """BCH product for the polyvector bracket (``gauge_exp`` is a homomorphism for it)."""
    return bch_general(theta, xi, g_bracket, _bch_depth(theta.chart.ring, depth))


def derivation_to_gerst(dd):
    """The degree -1 polyvector ``sum c_k d_k`` whose generators reproduce ``(D, Delta)``."""
    pc = dd.chart.pchart
    coeffs = express_in_basis(pc, dd.D, dd.Delta)
    return vector_field(pc, coeffs)


def gerst_to_derivation(chart, x):
    if x.degree != -1:
        raise ValueError("only degree -1 elements are derivations")
    pc = chart.pchart
    D = action_of(x)
    R = chart.ring
    Delta = []
    for m in range(chart.rank):
        tot = R.zero()
        for (k,), c in x.terms.items():
            tot = tot + c * pc.generators[k].logpart[m]
        Delta.append(tot)
    return LogDerivation(chart, D, Delta)


def transport_by_automorphism(aut, x, inverse=None):
    """``T_phi``: functions go to ``phi(f)``, derivations to ``phi o D o phi^-1``."""
    ch = aut.chart
    pc = ch.pchart
    R = ch.ring
    if x.degree == 0:
        c = x.terms.get(())
        return pc.function(aut(c)) if c is not None else pc.zero(0)
    inv = inverse or aut.inverse()
    images = []
    for g in pc.generators:
        D = [aut(apply_derivation(g.action, inv(v))) for v in R.gens()]
        # Delta'(e) = phi(Delta(e)) + u phi(D(w)),  w the unit of phi^-1
        Delta = [aut(g.logpart[i]) + ch_u * aut(apply_derivation(g.action, w))
                 for i, (ch_u, w) in enumerate(zip(aut.units, inv.units))]
        images.append(vector_field(pc, express_in_basis(pc, D, Delta)))
    out = pc.zero(x.degree)
    for w, c in x.terms.items():
        t = pc.function(aut(c))
        for i in w:
            t = g_wedge(t, images[i])
        out = out + t
    return out


def verify_auto_gauge(aut):
    """Compare ``T_phi`` with ``gauge_exp(-log(phi))`` on functions and generators."""
    ch = aut.chart
    pc = ch.pchart
    theta = derivation_to_gerst(log_automorphism(aut))
    minus = theta.scale(-1)
    inv = aut.inverse()
    failures = []
    probes = [pc.function(v) for v in ch.ring.gens()] + [pc.gen(i) for i in range(pc.dim)]
    for x in probes:
        lhs = transport_by_automorphism(aut, x, inv)
        rhs = gauge_exp(minus, x)
        if lhs != rhs:
            failures.append(f"T_phi({x}) = {lhs} but exp(-theta)({x}) = {rhs}")
    return {"passed": not failures, "theta": theta, "cases": len(probes), "failures": failures}
