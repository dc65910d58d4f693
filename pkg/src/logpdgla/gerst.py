"""Polyvector fields on affine log charts.

A :class:`PolyvectorChart` is a chart ring together with derivation
generators ``d_1 .. d_d`` (relative log derivations) given by their action on
the ring variables and, optionally, their values on the monoid generators.
Polyvectors (:class:`GerstElement`) form the free module on increasing wedges
of the generators; a wedge of length ``m`` sits in degree ``-m``.

The bracket is the negative of the Schouten-Nijenhuis bracket, so on
generators

    [d, f] = -d(f),      [f, g] = 0,      [d_i, d_j] = -(d_i d_j - d_j d_i),

extended by the odd Leibniz rule.
"""
from __future__ import annotations

from fractions import Fraction

from . import linalg
from .exactalg import PolyElement, RingHom, apply_derivation
from .signs import koszul, merge_sign


class OutsideSpanError(ValueError):
    pass


class Generator:
    """A derivation generator: values on variables and on monoid generators."""

    def __init__(self, name, action, logpart=()):
        self.name = name
        self.action = dict(action) if isinstance(action, dict) else tuple(action)
        self.logpart = dict(logpart) if isinstance(logpart, dict) else tuple(logpart)

    def __repr__(self):
        return f"Generator({self.name})"


class PolyvectorChart:
    """Chart ring with a basis of relative log derivations.

    ``lie`` maps ``(i, j)`` with ``i < j`` to the coefficients of the
    commutator ``d_i d_j - d_j d_i`` in the generator basis.  When omitted it
    is computed from the actions.
    """

    def __init__(self, name, ring, generators, lie=None, monoid=()):
        self.name = name
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g.action, dict):
                act = [ring.element(g.action.get(v, 0)) for v in ring.variables]
            else:
                act = [ring.element(a) for a in g.action]
            if isinstance(g.logpart, dict):
                lp = [ring.element(g.logpart.get(m, 0)) for m in monoid]
            else:
                lp = [ring.element(a) for a in g.logpart]
            gens.append(Generator(g.name, act, lp))
        self.generators = tuple(gens)
        self.monoid = tuple(monoid)
        self.dim = len(gens)
        if lie is None:
            lie = {}
            for i in range(self.dim):
                for j in range(i + 1, self.dim):
                    comm = [apply_derivation(self.generators[i].action, self.generators[j].action[v])
                            - apply_derivation(self.generators[j].action, self.generators[i].action[v])
                            for v in range(ring.nvars)]
                    lie[(i, j)] = express_in_basis(self, comm)
        self.lie = {k: tuple(ring.element(c) for c in v) for k, v in lie.items()}
        self._key = (name, ring, tuple((g.name, g.action, g.logpart) for g in self.generators),
                     tuple(sorted(self.lie.items())))

    def __eq__(self, other):
        return self is other or (isinstance(other, PolyvectorChart) and self._key == other._key)

    def __hash__(self):
        return hash(self._key[:2])

    def __repr__(self):
        return f"PolyvectorChart({self.name!r}, gens={[g.name for g in self.generators]})"

    def lie_coeffs(self, i, j):
        if i == j:
            return None
        if i < j:
            return self.lie.get((i, j))
        c = self.lie.get((j, i))
        return None if c is None else tuple(-x for x in c)

    def with_lie(self, lie):
        """Copy with a replaced bracket table (used for fault injection)."""
        return PolyvectorChart(self.name + "*", self.ring, self.generators, lie, self.monoid)

    def truncated(self, k):
        ring = self.ring.with_order(k)
        gens = [Generator(g.name, [x.truncate(k) for x in g.action], [x.truncate(k) for x in g.logpart])
                for g in self.generators]
        lie = {key: tuple(c.truncate(k) for c in v) for key, v in self.lie.items()}
        return PolyvectorChart(self.name, ring, gens, lie, self.monoid)

    def localized(self, names):
        ring = self.ring.localized(names)
        gens = [Generator(g.name, [PolyElement(ring, dict(x.terms)) for x in g.action],
                          [PolyElement(ring, dict(x.terms)) for x in g.logpart]) for g in self.generators]
        lie = {key: tuple(PolyElement(ring, dict(c.terms)) for c in v) for key, v in self.lie.items()}
        return PolyvectorChart(self.name, ring, gens, lie, self.monoid)

    # element constructors ---------------------------------------------------
    def zero(self, degree=0):
        return GerstElement(self, degree, {})

    def function(self, f):
        return GerstElement(self, 0, {(): self.ring.element(f)})

    def gen(self, i, coeff=1):
        if isinstance(i, str):
            i = [g.name for g in self.generators].index(i)
        return GerstElement(self, -1, {(i,): self.ring.element(coeff)})

    def derive(self, i, f):
        """Apply generator ``i`` to the ring element ``f``."""
        return apply_derivation(self.generators[i].action, f)

    def check_tables(self):
        """Verify relativity, the bracket table against the actions, antisymmetry and Jacobi."""
        problems = []
        R = self.ring
        for gi, g in enumerate(self.generators):
            for b in range(R.rank):
                if apply_derivation(g.action, R.base(b)):
                    problems.append(f"{g.name} does not kill the base image t_{b}")
        for i in range(self.dim):
            for j in range(self.dim):
                if i == j:
                    continue
                c = self.lie_coeffs(i, j) or (R.zero(),) * self.dim
                for v in range(R.nvars):
                    lhs = self.derive(i, self.generators[j].action[v]) - self.derive(j, self.generators[i].action[v])
                    rhs = R.zero()
                    for k in range(self.dim):
                        rhs = rhs + c[k] * self.generators[k].action[v]
                    if lhs != rhs:
                        problems.append(f"bracket table entry ({i},{j}) disagrees with the actions on {R.variables[v]}")
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                for k in range(j + 1, self.dim):
                    a, b, c = self.gen(i), self.gen(j), self.gen(k)
                    jac = g_bracket(a, g_bracket(b, c)) - g_bracket(g_bracket(a, b), c) - g_bracket(b, g_bracket(a, c))
                    if jac:
                        problems.append(f"Jacobi fails on generators ({i},{j},{k})")
        return problems


class GerstElement:
    """Homogeneous polyvector of degree ``degree`` (between ``-dim`` and 0)."""

    __slots__ = ("chart", "degree", "terms")

    def __init__(self, chart, degree, terms):
        self.chart = chart
        self.degree = degree
        out = {}
        for w, c in terms.items():
            w = tuple(w)
            if len(w) != -degree:
                raise ValueError(f"wedge {w} does not have degree {degree}")
            if list(w) != sorted(set(w)):
                raise ValueError(f"wedge {w} is not strictly increasing")
            if c:
                out[w] = c
        self.terms = out

    @classmethod
    def _raw(cls, chart, degree, terms):
        x = cls.__new__(cls)
        x.chart, x.degree, x.terms = chart, degree, terms
        return x

    def __eq__(self, other):
        if not isinstance(other, GerstElement):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        names = [g.name for g in self.chart.generators]
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            if w:
                parts.append(f"({c})*" + "^".join(names[i] for i in w))
            else:
                parts.append(f"({c})")
        return " + ".join(parts)

    def __add__(self, other):
        if not other.terms:
            return self
        if not self.terms:
            return other
        if other.degree != self.degree:
            raise ValueError("adding polyvectors of different degrees")
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out[w] + c if w in out else c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return GerstElement._raw(self.chart, self.degree, out)

    def __neg__(self):
        return GerstElement._raw(self.chart, self.degree, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, PolyElement):
            out = {w: c * v for w, v in self.terms.items()}
        else:
            c = Fraction(c)
            if not c:
                return GerstElement._raw(self.chart, self.degree, {})
            out = {w: v.scale(c) for w, v in self.terms.items()}
        return GerstElement._raw(self.chart, self.degree, {w: v for w, v in out.items() if v})

    def map_coeffs(self, f, chart=None):
        out = {}
        for w, c in self.terms.items():
            v = f(c)
            if v:
                out[w] = v
        return GerstElement._raw(chart or self.chart, self.degree, out)

    def truncate(self, k, chart=None):
        chart = chart or self.chart.truncated(k)
        return self.map_coeffs(lambda c: c.truncate(k), chart)

    def coefficient_order(self):
        """Smallest base order among the coefficients (``None`` for zero)."""
        orders = [c.base_order() for c in self.terms.values()]
        return min(orders) if orders else None


def g_wedge(x, y):
    out = {}
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            s, w = merge_sign(w1, w2)
            if not s:
                continue
            v = c1 * c2
            if s < 0:
                v = -v
            if w in out:
                v = out[w] + v
            if v:
                out[w] = v
            else:
                out.pop(w, None)
    return GerstElement._raw(x.chart, x.degree + y.degree, out)


# bracket via the Leibniz rule on atoms ---------------------------------------
# an atom is ("f", PolyElement) of degree 0 or ("d", i) of degree -1

def _atom_elem(chart, atom):
    if atom[0] == "f":
        return GerstElement._raw(chart, 0, {(): atom[1]} if atom[1] else {})
    return GerstElement._raw(chart, -1, {(atom[1],): chart.ring.one()})


def _atom_deg(atom):
    return 0 if atom[0] == "f" else -1


def _atom_bracket(chart, a, b):
    if a[0] == "f" and b[0] == "f":
        return chart.zero(1)
    if a[0] == "d" and b[0] == "f":
        return chart.function(-chart.derive(a[1], b[1]))
    if a[0] == "f" and b[0] == "d":
        return chart.function(chart.derive(b[1], a[1]))
    c = chart.lie_coeffs(a[1], b[1])
    if c is None:
        return chart.zero(-1)
    return GerstElement(chart, -1, {(k,): -v for k, v in enumerate(c) if v})


def _wedge_all(chart, parts):
    out = parts[0]
    for p in parts[1:]:
        out = g_wedge(out, p)
    return out


def _bracket_atom_product(chart, w, factors):
    """``[w, u_1 ^ ... ^ u_r]`` for an atom ``w``."""
    dw = _atom_deg(w)
    total = None
    prefix_deg = 0
    for r, u in enumerate(factors):
        inner = _atom_bracket(chart, w, u)
        if inner:
            parts = [_atom_elem(chart, a) for a in factors[:r]] + [inner] + \
                    [_atom_elem(chart, a) for a in factors[r + 1:]]
            term = _wedge_all(chart, parts)
            if koszul(dw + 1, prefix_deg) < 0:
                term = -term
            total = term if total is None else total + term
        prefix_deg += _atom_deg(u)
    return total


def _bracket_mono(chart, f, I, g, J):
    xf = [("f", f)] + [("d", i) for i in I]
    yf = [("f", g)] + [("d", j) for j in J]
    dx = -len(I)
    total = None
    prefix_deg = 0
    for s, w in enumerate(yf):
        dw = _atom_deg(w)
        wx = _bracket_atom_product(chart, w, xf)  # [w, x]
        if wx is not None and wx:
            # [x, w] = -(-1)^((|x|+1)(|w|+1)) [w, x]
            inner = wx if koszul(dx + 1, dw + 1) < 0 else -wx
            parts = [_atom_elem(chart, a) for a in yf[:s]] + [inner] + \
                    [_atom_elem(chart, a) for a in yf[s + 1:]]
            term = _wedge_all(chart, parts)
            if koszul(dx + 1, prefix_deg) < 0:
                term = -term
            total = term if total is None else total + term
        prefix_deg += dw
    return total


def bracket_leibniz(x, y):
    """The bracket expanded atom by atom with the Leibniz rule (slow reference)."""
    deg = x.degree + y.degree + 1
    chart = x.chart
    out = GerstElement._raw(chart, deg, {})
    for I, f in x.terms.items():
        for J, g in y.terms.items():
            t = _bracket_mono(chart, f, I, g, J)
            if t is not None and t:
                out = out + t
    if not out.terms:
        return GerstElement._raw(chart, deg, {})
    return out


def _wedge_bracket(chart, J, I):
    """``[d_J, d_I]`` for increasing generator wedges, cached on the chart."""
    cache = chart.__dict__.setdefault("_wedge_brackets", {})
    key = (J, I)
    if key not in cache:
        one = chart.ring.one()
        cache[key] = bracket_leibniz(GerstElement._raw(chart, -len(J), {J: one}),
                                     GerstElement._raw(chart, -len(I), {I: one})).terms
    return cache[key]


def _accumulate(out, w, c):
    v = out[w] + c if w in out else c
    if v:
        out[w] = v
    else:
        out.pop(w, None)


def g_bracket(x, y):
    """Bracket of polyvectors.

    For ``x = f d_I`` and ``y = g d_J`` with ``|I| = p`` and ``|J| = q``:

        [x, y] = (-1)^p f [g, d_I] ^ d_J
                 - (-1)^((p+1)(q+1)) g ((-1)^q [f, d_J] ^ d_I + f [d_J, d_I])

    where ``[g, d_I] = sum_r (-1)^r d_(i_r)(g) d_(I - i_r)``.  Derivatives
    are taken once per term and ``[d_J, d_I]`` comes from a per-chart cache.
    """
    chart = x.chart
    deg = x.degree + y.degree + 1
    out = {}
    if not x.terms or not y.terms:
        return GerstElement._raw(chart, deg, out)
    derivs = {}

    def derive(i, f, key):
        k = (i, key)
        if k not in derivs:
            derivs[k] = chart.derive(i, f)
        return derivs[k]

    for I, f in x.terms.items():
        p = len(I)
        for J, g in y.terms.items():
            q = len(J)
            for r, i in enumerate(I):
                dg = derive(i, g, ("y", J))
                if not dg:
                    continue
                s, w = merge_sign(I[:r] + I[r + 1:], J)
                if s:
                    c = f * dg
                    _accumulate(out, w, -c if s * (-1) ** (p + r) < 0 else c)
            outer = -koszul(p + 1, q + 1)
            for r, j in enumerate(J):
                df = derive(j, f, ("x", I))
                if not df:
                    continue
                s, w = merge_sign(J[:r] + J[r + 1:], I)
                if s:
                    c = g * df
                    _accumulate(out, w, -c if s * outer * (-1) ** (q + r) < 0 else c)
            if p and q:
                for w, c in _wedge_bracket(chart, J, I).items():
                    c = f * g * c
                    _accumulate(out, w, -c if outer < 0 else c)
    return GerstElement._raw(chart, deg, out)


# linear algebra in the generator basis -----------------------------------------

def express_in_basis(chart, values, logvalues=None):
    """Coefficients ``c`` with ``sum_k c_k d_k(v) = values[v]`` for all variables.

    ``values`` is a sequence of ring elements, one per ring variable.  Solved
    exactly over Q with unknown coefficient monomials read off from the data;
    raises :class:`OutsideSpanError` if no solution exists.  The canonical
    solution (free unknowns zero) is returned.
    """
    R = chart.ring
    values = [R.element(v) for v in values]
    gens = chart.generators
    if not any(values) and not (logvalues and any(logvalues)):
        return tuple(R.zero() for _ in gens)
    cand = [set() for _ in gens]
    for k, g in enumerate(gens):
        eqs_src = [(values[v], g.action[v]) for v in range(R.nvars)]
        if logvalues is not None:
            eqs_src += [(R.element(logvalues[m]), g.logpart[m]) for m in range(len(logvalues))]
        for val, act in eqs_src:
            for mu in val.terms:
                for nu in act.terms:
                    m = tuple(a - b for a, b in zip(mu, nu))
                    if any(e < 0 and not inv for e, inv in zip(m, R.invertible)):
                        continue
                    if R.base_count(m) > R.order:
                        continue
                    cand[k].add(m)
    cols = [(k, m) for k in range(len(gens)) for m in sorted(cand[k])]
    rows = {}
    rhs = {}

    def add_eq(tag, val, acts):
        for ci, (k, m) in enumerate(cols):
            prod = PolyElement(R, {m: Fraction(1)}) * acts[k]
            for mm, c in prod.terms.items():
                rows.setdefault((tag, mm), {})[ci] = c
        for mm, c in val.terms.items():
            rhs[(tag, mm)] = c
            rows.setdefault((tag, mm), {})

    for v in range(R.nvars):
        add_eq(("v", v), values[v], [g.action[v] for g in gens])
    if logvalues is not None:
        for m in range(len(logvalues)):
            add_eq(("m", m), R.element(logvalues[m]), [g.logpart[m] for g in gens])
    keys = sorted(rows, key=repr)
    sol, _ = linalg.solve([rows[k] for k in keys], len(cols), [rhs.get(k, 0) for k in keys])
    if sol is None:
        raise OutsideSpanError("derivation is not in the span of the chart generators")
    coeffs = [dict() for _ in gens]
    for ci, val in sol.items():
        k, m = cols[ci]
        coeffs[k][m] = val
    out = tuple(PolyElement(R, c) for c in coeffs)
    # verify (rewriting could in principle hide a mismatch)
    for v in range(R.nvars):
        tot = R.zero()
        for k, g in enumerate(gens):
            tot = tot + out[k] * g.action[v]
        if tot != values[v]:
            raise OutsideSpanError("derivation is not in the span of the chart generators")
    return out


def vector_field(chart, coeffs):
    """The degree -1 element ``sum_k coeffs[k] d_k``."""
    return GerstElement(chart, -1, {(k,): chart.ring.element(c) for k, c in enumerate(coeffs)})


def action_of(x):
    """Values of a degree -1 element on the ring variables."""
    chart = x.chart
    R = chart.ring
    out = []
    for v in range(R.nvars):
        tot = R.zero()
        for (k,), c in x.terms.items():
            tot = tot + c * chart.generators[k].action[v]
        out.append(tot)
    return out


def minus_one_injectivity(chart, theta):
    """A ring variable ``f`` with ``[theta, f] != 0``, or ``None`` if theta is 0.

    Returns ``(name, value)`` for the witness.
    """
    if theta.degree != -1:
        raise ValueError("theta must have degree -1")
    if not theta.terms:
        return None
    for v, name in enumerate(chart.ring.variables):
        val = g_bracket(theta, chart.function(chart.ring.gens()[v]))
        if val:
            return name, val.terms[()]
    raise AssertionError(f"{chart.name} is not (-1)-injective: {theta} brackets every variable to 0")


# transport ----------------------------------------------------------------------

class ChartMap:
    """A map of polyvector charts induced by an (essentially) invertible ring map.

    ``hom`` goes from ``source.ring`` to ``target.ring``.  ``inverse`` goes
    from ``target.ring`` into ``source.ring`` localized at ``localize`` (the
    identity on variables when ``localize`` is empty).  Derivations are pushed
    forward by conjugation ``D' = hom o D o inverse``.
    """

    def __init__(self, source, target, hom, inverse, localize=()):
        self.source = source
        self.target = target
        self.hom = hom
        self.localize = tuple(localize)
        if localize:
            self._loc = source.localized(localize)
        else:
            self._loc = source
        self.inverse = RingHom(target.ring, self._loc.ring, [PolyElement(self._loc.ring, dict(x.terms))
                                                              if x.ring != self._loc.ring else x
                                                              for x in inverse.images])
        self._hom_loc = RingHom(self._loc.ring, target.ring, hom.images)
        self._gen_images = None

    def pushed_action(self, action):
        """Values on the target variables of the transported derivation."""
        loc = self._loc.ring
        act = [PolyElement(loc, dict(a.terms)) for a in action]
        out = []
        for w in self.target.ring.gens():
            out.append(self._hom_loc(apply_derivation(act, self.inverse(w))))
        return out

    @property
    def gen_images(self):
        if self._gen_images is None:
            imgs = []
            for g in self.source.generators:
                imgs.append(vector_field(self.target, express_in_basis(self.target, self.pushed_action(g.action))))
            self._gen_images = tuple(imgs)
        return self._gen_images

    def __call__(self, x):
        if x.degree == 0:
            c = x.terms.get(())
            return self.target.function(self.hom(c)) if c is not None else self.target.zero(0)
        out = self.target.zero(x.degree)
        imgs = self.gen_images
        for w, c in x.terms.items():
            t = self.target.function(self.hom(c))
            for i in w:
                t = g_wedge(t, imgs[i])
            out = out + t
        return out

    def truncated(self, k):
        return ChartMap(self.source.truncated(k), self.target.truncated(k), self.hom.truncated(k),
                        RingHom(self.inverse.source.with_order(k), self._loc.ring.with_order(k),
                                [x.truncate(k) for x in self.inverse.images]),
                        self.localize)


def transport(cmap, x):
    """Push ``x`` forward along the chart map ``cmap``."""
    return cmap(x)


def check_gerstenhaber_axioms(samples):
    """Check the four defining relations on sample triples ``(x, y, z)``.

    Returns ``{"passed": bool, "cases": n, "witness": str | None}``.
    """
    n = 0
    for x, y, z in samples:
        n += 1
        a, b = x.degree, y.degree
        checks = [
            ("graded commutativity", g_wedge(x, y), g_wedge(y, x).scale(koszul(a, b))),
            ("associativity", g_wedge(g_wedge(x, y), z), g_wedge(x, g_wedge(y, z))),
            ("odd Leibniz", g_bracket(x, g_wedge(y, z)),
             g_wedge(g_bracket(x, y), z) + g_wedge(y, g_bracket(x, z)).scale(koszul(a + 1, b))),
            ("antisymmetry", g_bracket(x, y), g_bracket(y, x).scale(-koszul(a + 1, b + 1))),
            ("Jacobi", g_bracket(x, g_bracket(y, z)),
             g_bracket(g_bracket(x, y), z) + g_bracket(y, g_bracket(x, z)).scale(koszul(a + 1, b + 1))),
        ]
        for name, lhs, rhs in checks:
            if lhs != rhs:
                return {"passed": False, "cases": n,
                        "witness": f"{name} fails for x={x}, y={y}, z={z}: {lhs} != {rhs}"}
    return {"passed": True, "cases": n, "witness": None}
