"""Thom-Whitney resolutions over the nerve of a finite cover.

A :class:`CoverNerve` stores, for every ordered overlap ``(i_0 < ... < i_n)``,
a polyvector chart, and for every face ``k`` a :class:`~logpdgla.gerst.ChartMap`
from the chart of the face (``i_k`` removed) to the chart of the simplex.

A :class:`TWElement` of bidegree ``(p, q)`` is a family of finite sums
``sum_mu a_mu (x) v_mu`` with ``a_mu`` a q-form on ``Delta^n`` and ``v_mu`` a
degree-p polyvector on the simplex chart, subject to

    (face_k (x) Id)(x_s) = (Id (x) coface_k)(x_{face_k s}).

Components are stored as ``{simplex: {form monomial: GerstElement}}``.
"""
from __future__ import annotations

from fractions import Fraction

from . import apl
from .apl import APLForm, apl_extend, mono_mul
from .exactalg import PolyElement
from .gerst import GerstElement, g_bracket, g_wedge
from .logdef import exp_ad
from .signs import koszul


class NerveError(ValueError):
    pass


class InvalidElementError(ValueError):
    pass


def face_of(s, k):
    return s[:k] + s[k + 1:]


class CoverNerve:
    """Nerve of a finite cover with charts on all simplices and coface maps."""

    def __init__(self, name, chart_ids, charts, cofaces, order, check=True):
        self.name = name
        self.chart_ids = tuple(chart_ids)
        pos = {c: i for i, c in enumerate(self.chart_ids)}
        for s in charts:
            if list(s) != sorted(s, key=pos.__getitem__) or len(set(s)) != len(s):
                raise NerveError(f"simplex {s} is not in ascending chart order")
        self.simplices = tuple(sorted(charts, key=lambda s: (len(s), [pos[c] for c in s])))
        self.charts = dict(charts)
        self.cofaces = dict(cofaces)
        self.order = order
        self.dim = max(len(s) for s in self.simplices) - 1
        for s in self.simplices:
            if len(s) > 1:
                for k in range(len(s)):
                    f = face_of(s, k)
                    if f not in self.charts:
                        raise NerveError(f"face {f} of {s} missing")
                    if (s, k) not in self.cofaces:
                        raise NerveError(f"coface map for face {k} of {s} missing")
        self._truncs = {order: self}
        self.key = (name, order)
        if check:
            bad = self.semicosimplicial_violations()
            if bad:
                raise NerveError("; ".join(bad))

    def __repr__(self):
        return f"CoverNerve({self.name!r}, k={self.order}, simplices={len(self.simplices)})"

    def __eq__(self, other):
        return self is other or (isinstance(other, CoverNerve) and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def of_dim(self, n):
        return [s for s in self.simplices if len(s) == n + 1]

    def cofaces_of(self, s):
        """Simplices having ``s`` as a codimension-one face, with the face index."""
        out = []
        for t in self.simplices:
            if len(t) == len(s) + 1:
                for k in range(len(t)):
                    if face_of(t, k) == s:
                        out.append((t, k))
        return out

    def truncated(self, k):
        if k > self.order or k < 0:
            raise ValueError("invalid truncation order")
        if k not in self._truncs:
            charts = {s: c.truncated(k) for s, c in self.charts.items()}
            cof = {key: m.truncated(k) for key, m in self.cofaces.items()}
            nv = CoverNerve(self.name, self.chart_ids, charts, cof, k, check=False)
            self._truncs[k] = nv
        return self._truncs[k]

    def semicosimplicial_violations(self):
        """Check ``coface_{l} coface_{k} = coface_{k+1} coface_{l}`` on generators."""
        bad = []
        for s in self.simplices:
            n = len(s)
            if n < 3:
                continue
            for i in range(n):
                for j in range(i + 1, n):
                    base = face_of(face_of(s, j), i)
                    src = self.charts[base]
                    # path A: base -> s minus j (insert at i) -> s (insert at j)
                    a1 = self.cofaces[(face_of(s, j), i)]
                    a2 = self.cofaces[(s, j)]
                    # path B: base -> s minus i (insert at j-1) -> s (insert at i)
                    b1 = self.cofaces[(face_of(s, i), j - 1)]
                    b2 = self.cofaces[(s, i)]
                    probes = [src.function(v) for v in src.ring.gens()] + [src.gen(g) for g in range(src.dim)]
                    for pr in probes:
                        if a2(a1(pr)) != b2(b1(pr)):
                            bad.append(f"semicosimplicial identity fails on {s} faces ({i},{j}) at {pr}")
        return bad


def cech_semicosimplicial(name, chart_ids, charts, cofaces, order):
    """Assemble and validate the Cech semicosimplicial module of a cover."""
    return CoverNerve(name, chart_ids, charts, cofaces, order, check=True)


# elements -----------------------------------------------------------------------------

def _comp_add(a, b):
    out = dict(a)
    for key, v in b.items():
        if key in out:
            w = out[key] + v
            if w:
                out[key] = w
            else:
                del out[key]
        elif v:
            out[key] = v
    return out


class TWElement:
    __slots__ = ("nerve", "p", "q", "comps")

    def __init__(self, nerve, p, q, comps=None):
        self.nerve = nerve
        self.p = p
        self.q = q
        clean = {}
        for s, comp in (comps or {}).items():
            s = tuple(s)
            if s not in nerve.charts:
                raise ValueError(f"{s} is not a simplex of {nerve.name}")
            n = len(s) - 1
            cc = {}
            for key, v in comp.items():
                if isinstance(key, APLForm):
                    raise TypeError("components are keyed by form monomials")
                if len(key[0]) != n or len(key[1]) != q:
                    raise ValueError(f"bad form monomial {key} on simplex {s}")
                if v.degree != p and v:
                    raise ValueError(f"polyvector of degree {v.degree} in a degree {p} element")
                if v:
                    cc[key] = cc[key] + v if key in cc else v
            cc = {k: v for k, v in cc.items() if v}
            if cc:
                clean[s] = cc
        self.comps = clean

    @classmethod
    def _raw(cls, nerve, p, q, comps):
        x = cls.__new__(cls)
        x.nerve, x.p, x.q, x.comps = nerve, p, q, comps
        return x

    @classmethod
    def zero(cls, nerve, p, q):
        return cls._raw(nerve, p, q, {})

    @property
    def degree(self):
        return self.p + self.q

    def __repr__(self):
        parts = []
        for s in self.nerve.simplices:
            if s in self.comps:
                body = " + ".join(f"[{_key_str(k)}]({v})" for k, v in sorted(self.comps[s].items(), key=lambda kv: kv[0]))
                parts.append(f"{''.join(s)}: {body}")
        return f"TW{(self.p, self.q)}{{" + "; ".join(parts) + "}"

    def __eq__(self, other):
        if not isinstance(other, TWElement):
            return NotImplemented
        if not self.comps and not other.comps:
            return True
        return (self.p, self.q) == (other.p, other.q) and self.comps == other.comps

    def __hash__(self):
        return hash((self.p, self.q, frozenset((s, frozenset(c.items())) for s, c in self.comps.items())))

    def __bool__(self):
        return bool(self.comps)

    def _same(self, other):
        if self.nerve is not other.nerve and self.nerve != other.nerve:
            raise ValueError("elements over different nerves")

    def __add__(self, other):
        self._same(other)
        if not other.comps:
            return self
        if not self.comps:
            return other
        if (self.p, self.q) != (other.p, other.q):
            raise ValueError("adding elements of different bidegrees")
        out = dict(self.comps)
        for s, c in other.comps.items():
            if s in out:
                m = _comp_add(out[s], c)
                if m:
                    out[s] = m
                else:
                    del out[s]
            else:
                out[s] = c
        return TWElement._raw(self.nerve, self.p, self.q, out)

    def __neg__(self):
        return TWElement._raw(self.nerve, self.p, self.q,
                              {s: {k: -v for k, v in c.items()} for s, c in self.comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return TWElement.zero(self.nerve, self.p, self.q)
        return TWElement._raw(self.nerve, self.p, self.q,
                              {s: {k: v.scale(c) for k, v in cc.items()} for s, cc in self.comps.items()})

    def component(self, s):
        return self.comps.get(tuple(s), {})

    def form_of(self, s, coefficient_filter=None):
        """Component on ``s`` as a dict ``GerstElement-term -> APLForm`` (for display)."""
        n = len(s) - 1
        out = {}
        for key, v in self.component(s).items():
            for w, c in v.terms.items():
                for m, a in c.terms.items():
                    out.setdefault((w, m), {})[key] = a
        return {k: APLForm(n, self.q, d) for k, d in out.items()}

    def coefficient_order(self):
        orders = [v.coefficient_order() for c in self.comps.values() for v in c.values()]
        orders = [o for o in orders if o is not None]
        return min(orders) if orders else None

    def truncate(self, k):
        return tw_base_change(self, k)


def _key_str(key):
    e, dts = key
    f = [f"t{i}^{a}" if a > 1 else f"t{i}" for i, a in enumerate(e) if a] + [f"dt{i}" for i in dts]
    return "*".join(f) or "1"


def pure(nerve, s, form, v):
    """The family supported on ``s`` with component ``form (x) v`` (not necessarily valid)."""
    comp = {}
    for key, c in form.terms.items():
        t = v.scale(c)
        if t:
            comp[key] = t
    return TWElement(nerve, v.degree, form.degree, {s: comp} if comp else {})


# face equations ---------------------------------------------------------------------------

def _face_side(comp, n, k, q):
    out = {}
    for key, v in comp.items():
        for kk, c in apl._face_mono(n, k, key):
            t = v.scale(c)
            out[kk] = out[kk] + t if kk in out else t
    return {k2: v for k2, v in out.items() if v}


def _coface_side(nerve, s, k, face_comp):
    cmap = nerve.cofaces[(s, k)]
    out = {}
    for key, v in face_comp.items():
        t = cmap(v)
        if t:
            out[key] = t
    return out


def tw_validate(x):
    """Check every face equation; returns a report with the first offender."""
    nerve = x.nerve
    checked = 0
    for s in nerve.simplices:
        n = len(s) - 1
        if n == 0:
            continue
        for k in range(n + 1):
            checked += 1
            lhs = _face_side(x.component(s), n, k, x.q)
            rhs = _coface_side(nerve, s, k, x.component(face_of(s, k)))
            if lhs != rhs:
                return {"valid": False, "simplex": s, "face": k, "checked": checked,
                        "witness": f"face {k} of the component on {s} does not match its face data"}
    return {"valid": True, "simplex": None, "face": None, "checked": checked, "witness": None}


def is_valid(x):
    return tw_validate(x)["valid"]


# operations ---------------------------------------------------------------------------------

def tw_d(x):
    out = {}
    for s, comp in x.comps.items():
        acc = {}
        for key, v in comp.items():
            for kk, c in apl._d_mono(key):
                t = v.scale(c)
                acc[kk] = acc[kk] + t if kk in acc else t
        acc = {k: v for k, v in acc.items() if v}
        if acc:
            out[s] = acc
    return TWElement._raw(x.nerve, x.p, x.q + 1, out)


def _product(x, y, op, sign_exp, p_shift):
    x._same(y)
    out = {}
    bdeg = y.q
    for s, cx in x.comps.items():
        cy = y.comps.get(s)
        if not cy:
            continue
        acc = {}
        for k1, v in cx.items():
            for k2, w in cy.items():
                sgn, key = mono_mul(k1, k2)
                if not sgn:
                    continue
                t = op(v, w)
                if not t:
                    continue
                if sgn * koszul(*sign_exp(x.p, bdeg)) < 0:
                    t = -t
                acc[key] = acc[key] + t if key in acc else t
        acc = {k: v for k, v in acc.items() if v}
        if acc:
            out[s] = acc
    return TWElement._raw(x.nerve, x.p + y.p + p_shift, x.q + y.q, out)


def tw_wedge(x, y):
    """``(a (x) v) ^ (b (x) w) = (-1)^(|b||v|) (a ^ b) (x) (v ^ w)``."""
    return _product(x, y, g_wedge, lambda pv, qb: (qb, pv), 0)


def tw_bracket(x, y):
    """``[a (x) v, b (x) w] = (-1)^((|v|+1)|b|) (a ^ b) (x) [v, w]``."""
    return _product(x, y, g_bracket, lambda pv, qb: (pv + 1, qb), 1)


def tw_unit(nerve):
    comps = {}
    for s in nerve.simplices:
        n = len(s) - 1
        comps[s] = {((0,) * n, ()): nerve.charts[s].function(1)}
    return TWElement(nerve, 0, 0, comps)


def tw_gauge(theta, x):
    if (theta.p, theta.q) != (-1, 0):
        raise ValueError("gauge parameter must have bidegree (-1, 0)")
    o = theta.coefficient_order()
    if o is not None and o < 1:
        raise ValueError("gauge parameter must have coefficients in the base ideal")
    return exp_ad(theta, x, tw_bracket, theta.nerve.order + 2)


def tw_base_change(x, k):
    if k < 0 or k > x.nerve.order:
        raise ValueError("invalid truncation order")
    nv = x.nerve.truncated(k)
    if nv is x.nerve:
        return x
    out = {}
    for s, comp in x.comps.items():
        ch = nv.charts[s]
        acc = {}
        for key, v in comp.items():
            t = v.truncate(k, ch)
            if t:
                acc[key] = t
        if acc:
            out[s] = acc
    return TWElement._raw(nv, x.p, x.q, out)


# extension ----------------------------------------------------------------------------------

def _flatten(comp):
    out = {}
    for key, v in comp.items():
        for w, c in v.terms.items():
            for m, a in c.terms.items():
                out.setdefault((w, m), {})[key] = a
    return out


def extend_component(nerve, s, faces, p, q, ceiling=None):
    """A component on ``s`` whose k-th face is ``faces[k]`` (dicts keyed by form monomial)."""
    n = len(s) - 1
    chart = nerve.charts[s]
    flat = [_flatten(f) for f in faces]
    keys = set()
    for f in flat:
        keys |= set(f)
    comp = {}
    for (w, m) in sorted(keys):
        forms = [APLForm(n - 1, q, f.get((w, m), {})) for f in flat]
        sol = apl_extend(forms, ceiling=ceiling)
        for key, a in sol.terms.items():
            t = GerstElement(chart, p, {w: PolyElement(chart.ring, {m: a})})
            comp[key] = comp[key] + t if key in comp else t
    return {k: v for k, v in comp.items() if v}


def complete(nerve, p, q, fixed, extra=None, ceiling=None):
    """Fill in a valid element from prescribed components.

    Simplices are processed by increasing dimension.  A simplex in ``fixed``
    keeps its component (it must be compatible); any other simplex gets the
    canonical extension of its face data, plus ``extra(s)`` if given (which
    must vanish on all faces).
    """
    comps = {}
    for s in nerve.simplices:
        n = len(s) - 1
        if s in fixed:
            comps[s] = dict(fixed[s])
            continue
        if n == 0 or q > n:
            comp = {}
        else:
            faces = [_coface_side(nerve, s, k, comps.get(face_of(s, k), {})) for k in range(n + 1)]
            comp = extend_component(nerve, s, faces, p, q, ceiling) if any(faces) else {}
        if extra is not None:
            e = extra(s)
            if e:
                comp = _comp_add(comp, e)
        if comp:
            comps[s] = comp
    return TWElement(nerve, p, q, comps)


def lift(x, nerve):
    """Lift a valid element to a nerve of higher order (same presentation).

    Coefficients are reinterpreted at the new order and the face defects,
    which lie in ``I^(k+1)``, are repaired simplex by simplex.
    """
    comps = {}
    for s in nerve.simplices:
        ch = nerve.charts[s]
        comp = {key: v.map_coeffs(lambda c: PolyElement(ch.ring, dict(c.terms)), ch)
                for key, v in x.component(s).items()}
        n = len(s) - 1
        if n >= 1:
            defects = []
            for k in range(n + 1):
                want = _coface_side(nerve, s, k, comps.get(face_of(s, k), {}))
                have = _face_side(comp, n, k, x.q)
                defects.append(_comp_add(want, {kk: -v for kk, v in have.items()}))
            if any(defects):
                comp = _comp_add(comp, extend_component(nerve, s, defects, x.p, x.q))
        comp = {k: v for k, v in comp.items() if v}
        if comp:
            comps[s] = comp
    return TWElement(nerve, x.p, x.q, comps)


# cohomology in degree zero --------------------------------------------------------------------

def extract_h0(x):
    """The vertex family of a closed ``q = 0`` element, after checking it glues."""
    if x.q != 0:
        raise ValueError("extract_h0 needs form degree 0")
    rep = tw_validate(x)
    if not rep["valid"]:
        raise InvalidElementError(rep["witness"])
    dx = tw_d(x)
    if dx:
        s = next(iter(dx.comps))
        raise InvalidElementError(f"element is not closed: component on {s} depends on t")
    return {s[0]: x.component(s).get((( ), ()), x.nerve.charts[s].zero(x.p)) for s in x.nerve.of_dim(0)}


def restriction(nerve, v, s):
    """Chart map from the vertex ``v`` to a simplex ``s`` containing it (composite of cofaces)."""
    path = []
    cur = s
    while len(cur) > 1:
        k = next(i for i, c in enumerate(cur) if c != v)
        path.append((cur, k))
        cur = face_of(cur, k)
    return path


def restrict(nerve, v, s, elem):
    path = restriction(nerve, v, s)
    for cur, k in reversed(path):
        elem = nerve.cofaces[(cur, k)](elem)
    return elem


def from_global(nerve, family):
    """Canonical inclusion of a compatible global section ``{vertex: polyvector}``."""
    p = next(iter(family.values())).degree
    comps = {}
    for s in nerve.simplices:
        n = len(s) - 1
        imgs = [restrict(nerve, v, s, family[v]) for v in s]
        for a in imgs[1:]:
            if a != imgs[0]:
                raise InvalidElementError(f"section does not glue on {s}")
        if imgs[0]:
            comps[s] = {((0,) * n, ()): imgs[0]}
    return TWElement(nerve, p, 0, comps)


def localized_element(nerve, s, v):
    """A valid element whose component on ``s`` is ``bump (x) v``, zero on other simplices of its dimension."""
    n = len(s) - 1
    b = apl.bump(n)
    fixed = {t: {} for t in nerve.simplices if len(t) <= len(s)}
    fixed[s] = {key: v.scale(c) for key, c in b.terms.items()}
    return complete(nerve, v.degree, 0, fixed)


def tw_minus_one_nonzero(theta):
    """``x`` in ``TW^{0,0}`` with ``[theta, x] != 0``.

    Scans simplices carrying a nonzero component and ring variables ``f``,
    using the element ``bump (x) f`` completed to a valid family.
    Returns ``(simplex, variable, x, [theta, x])``.
    """
    if theta.p != -1:
        raise ValueError("theta must have polyvector degree -1")
    if not theta.comps:
        raise ValueError("theta is zero")
    nerve = theta.nerve
    for s in nerve.simplices:
        if s not in theta.comps:
            continue
        ch = nerve.charts[s]
        for name, f in zip(ch.ring.variables, ch.ring.gens()):
            x = localized_element(nerve, s, ch.function(f))
            val = tw_bracket(theta, x)
            if val:
                return s, name, x, val
    raise AssertionError("no witness found: the polyvector charts are not (-1)-injective")
