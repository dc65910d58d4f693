"""JSON encodings for covers, Thom-Whitney elements and Maurer-Cartan problems.

Every top-level document carries ``schemaVersion`` (currently 1) and unknown
fields are rejected.  Failures raise :class:`SchemaError` whose ``path``
points at the offending field, e.g. ``eta.components[2].terms[0].coefficient``.
Polynomials use the text format of :func:`logpdgla.exactalg.parse_terms`.
See ``docs/schemas.md`` for the full description.
"""
from __future__ import annotations

from .curve import build_curve
from .exactalg import ChartRing, RingHom, format_terms
from .gerst import ChartMap, GerstElement, Generator, PolyvectorChart
from .toy import triangle_nerve, two_chart_nerve
from .tw import CoverNerve, NerveError, TWElement

SCHEMA_VERSION = 1
BUILTIN_NERVES = {
    "curve": lambda k: build_curve(k).nerve,
    "two-chart": two_chart_nerve,
    "triangle": triangle_nerve,
}


class SchemaError(ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


def _obj(data, path, required, optional=()):
    if not isinstance(data, dict):
        raise SchemaError(path, "expected an object")
    extra = set(data) - set(required) - set(optional)
    if extra:
        raise SchemaError(f"{path}.{sorted(extra)[0]}" if path else sorted(extra)[0], "unknown field")
    for key in required:
        if key not in data:
            raise SchemaError(f"{path}.{key}" if path else key, "missing field")
    return data


def _map(data, path):
    if not isinstance(data, dict) or not all(isinstance(v, str) for v in data.values()):
        raise SchemaError(path, "expected an object of polynomial strings")
    return data


def _list(data, path):
    if not isinstance(data, list):
        raise SchemaError(path, "expected a list")
    return data


def _version(data, path=""):
    v = data.get("schemaVersion")
    if v != SCHEMA_VERSION:
        raise SchemaError(f"{path}.schemaVersion" if path else "schemaVersion",
                          f"unsupported schema version {v!r} (expected {SCHEMA_VERSION})")


def _int(data, path, minimum=None):
    if not isinstance(data, int) or isinstance(data, bool) or (minimum is not None and data < minimum):
        raise SchemaError(path, f"expected an integer{'' if minimum is None else f' >= {minimum}'}")
    return data


def _poly(ring, text, path):
    try:
        return ring.parse(text)
    except (ValueError, TypeError) as e:
        raise SchemaError(path, str(e)) from None


# covers -----------------------------------------------------------------------------------

def nerve_to_json(nerve):
    """Cover document for ``nerve``; bracket tables are recomputed on reading."""
    charts = []
    for s in nerve.simplices:
        ch = nerve.charts[s]
        R = ch.ring
        gens = [{"name": g.name,
                 "action": {v: format_terms(R, a.terms) for v, a in zip(R.variables, g.action) if a},
                 "logpart": [format_terms(R, x.terms) for x in g.logpart]} for g in ch.generators]
        doc = {"simplex": list(s), "ring": R.to_json(), "generators": gens}
        if ch.monoid:
            doc["monoid"] = list(ch.monoid)
        charts.append(doc)
    cofaces = []
    for (s, k), m in sorted(nerve.cofaces.items(), key=lambda kv: (nerve.simplices.index(kv[0][0]), kv[0][1])):
        doc = {"simplex": list(s), "face": k,
               "images": {v: format_terms(m.target.ring, x.terms) for v, x in zip(m.source.ring.variables, m.hom.images)},
               "inverse": {v: format_terms(m.inverse.target, x.terms)
                           for v, x in zip(m.target.ring.variables, m.inverse.images)}}
        if m.localize:
            doc["localize"] = list(m.localize)
        cofaces.append(doc)
    return {"schemaVersion": SCHEMA_VERSION, "name": nerve.name, "chartIds": list(nerve.chart_ids),
            "charts": charts, "cofaces": cofaces}


def nerve_from_json(data, order, path="nerve"):
    """A builtin nerve name or a cover document, at truncation order ``order``."""
    if isinstance(data, str):
        if data not in BUILTIN_NERVES:
            raise SchemaError(path, f"unknown builtin nerve {data!r}; choose from {sorted(BUILTIN_NERVES)}")
        return BUILTIN_NERVES[data](order)
    _obj(data, path, ["schemaVersion", "name", "chartIds", "charts", "cofaces"])
    _version(data, path)
    ids = [str(c) for c in _list(data["chartIds"], f"{path}.chartIds")]
    charts = {}
    for i, c in enumerate(_list(data["charts"], f"{path}.charts")):
        cp = f"{path}.charts[{i}]"
        _obj(c, cp, ["simplex", "ring", "generators"], ["monoid"])
        try:
            ring = ChartRing.from_json(c["ring"], order=order)
        except (ValueError, KeyError, TypeError) as e:
            raise SchemaError(f"{cp}.ring", str(e)) from None
        monoid = tuple(c.get("monoid", ()))
        gens = []
        for j, g in enumerate(_list(c["generators"], f"{cp}.generators")):
            gp = f"{cp}.generators[{j}]"
            _obj(g, gp, ["name", "action"], ["logpart"])
            act = {}
            for v, text in _map(g["action"], f"{gp}.action").items():
                if v not in ring.variables:
                    raise SchemaError(f"{gp}.action.{v}", "not a ring variable")
                act[v] = _poly(ring, text, f"{gp}.action.{v}")
            lp = [_poly(ring, t, f"{gp}.logpart[{m}]") for m, t in enumerate(g.get("logpart", []))]
            if len(lp) != len(monoid):
                raise SchemaError(f"{gp}.logpart", "needs one entry per monoid generator")
            gens.append(Generator(g["name"], act, lp))
        s = tuple(str(x) for x in _list(c["simplex"], f"{cp}.simplex"))
        try:
            charts[s] = PolyvectorChart("U_" + "".join(s), ring, gens, monoid=monoid)
        except ValueError as e:
            raise SchemaError(cp, str(e)) from None
    cofaces = {}
    for i, c in enumerate(_list(data["cofaces"], f"{path}.cofaces")):
        cp = f"{path}.cofaces[{i}]"
        _obj(c, cp, ["simplex", "face", "images", "inverse"], ["localize"])
        s = tuple(str(x) for x in c["simplex"])
        k = _int(c["face"], f"{cp}.face", 0)
        if s not in charts or k >= len(s):
            raise SchemaError(cp, "coface refers to an unknown simplex or face")
        src, tgt = charts[s[:k] + s[k + 1:]], charts[s]
        loc = tuple(c.get("localize", ()))
        sloc = src.ring.localized(loc) if loc else src.ring
        imgs = {v: _poly(tgt.ring, t, f"{cp}.images.{v}") for v, t in _map(c["images"], f"{cp}.images").items()}
        inv = {v: _poly(sloc, t, f"{cp}.inverse.{v}") for v, t in _map(c["inverse"], f"{cp}.inverse").items()}
        for name, got, want in (("images", imgs, src.ring.variables), ("inverse", inv, tgt.ring.variables)):
            if set(got) != set(want):
                raise SchemaError(f"{cp}.{name}", f"needs exactly one entry per variable of {list(want)}")
        try:
            cofaces[(s, k)] = ChartMap(src, tgt, RingHom(src.ring, tgt.ring, imgs), RingHom(tgt.ring, sloc, inv), loc)
        except (ValueError, KeyError) as e:
            raise SchemaError(cp, str(e)) from None
    try:
        return CoverNerve(data["name"], ids, charts, cofaces, order)
    except NerveError as e:
        raise SchemaError(path, str(e)) from None


# elements ---------------------------------------------------------------------------------

def tw_to_json(x):
    comps = []
    for s in x.nerve.simplices:
        comp = x.component(s)
        if not comp:
            continue
        ch = x.nerve.charts[s]
        terms = []
        for key in sorted(comp):
            for w, c in sorted(comp[key].terms.items()):
                terms.append({"t": list(key[0]), "dt": list(key[1]),
                              "wedge": [ch.generators[i].name for i in w],
                              "coefficient": format_terms(ch.ring, c.terms)})
        comps.append({"simplex": list(s), "terms": terms})
    return {"schemaVersion": SCHEMA_VERSION, "p": x.p, "q": x.q, "components": comps}


def tw_from_json(data, nerve, path="element"):
    _obj(data, path, ["schemaVersion", "p", "q", "components"])
    _version(data, path)
    p = _int(data["p"], f"{path}.p")
    q = _int(data["q"], f"{path}.q", 0)
    if p > 0:
        raise SchemaError(f"{path}.p", "polyvector degree must be <= 0")
    comps = {}
    for i, c in enumerate(_list(data["components"], f"{path}.components")):
        cp = f"{path}.components[{i}]"
        _obj(c, cp, ["simplex", "terms"])
        s = tuple(str(v) for v in c["simplex"])
        if s not in nerve.charts:
            raise SchemaError(f"{cp}.simplex", f"{list(s)} is not a simplex of {nerve.name}")
        ch = nerve.charts[s]
        names = [g.name for g in ch.generators]
        n = len(s) - 1
        comp = comps.setdefault(s, {})
        for j, t in enumerate(_list(c["terms"], f"{cp}.terms")):
            tp = f"{cp}.terms[{j}]"
            _obj(t, tp, ["t", "dt", "wedge", "coefficient"])
            e = tuple(_int(a, f"{tp}.t", 0) for a in t["t"])
            dts = tuple(_int(a, f"{tp}.dt", 0) for a in t["dt"])
            if len(e) != n or len(dts) != q or list(dts) != sorted(set(dts)) or any(d >= n for d in dts):
                raise SchemaError(tp, f"form monomial does not fit Delta^{n} in degree {q}")
            try:
                w = [names.index(g) for g in t["wedge"]]
            except ValueError:
                raise SchemaError(f"{tp}.wedge", f"unknown generator; chart has {names}") from None
            if len(w) != -p or len(set(w)) != len(w):
                raise SchemaError(f"{tp}.wedge", f"needs {-p} distinct generators")
            coeff = _poly(ch.ring, t["coefficient"], f"{tp}.coefficient")
            sign = 1
            ww = list(w)
            for a in range(len(ww)):
                for b in range(len(ww) - 1 - a):
                    if ww[b] > ww[b + 1]:
                        ww[b], ww[b + 1] = ww[b + 1], ww[b]
                        sign = -sign
            g = GerstElement(ch, p, {tuple(ww): coeff.scale(sign)})
            key = (e, dts)
            comp[key] = comp[key] + g if key in comp else g
    return TWElement(nerve, p, q, comps)


# Maurer-Cartan problems -----------------------------------------------------------------

def mc_problem_from_json(data):
    _obj(data, "", ["schemaVersion", "nerve", "order", "eta"], ["theta"])
    _version(data)
    k = _int(data["order"], "order", 0)
    nerve = nerve_from_json(data["nerve"], k)
    eta = tw_from_json(data["eta"], nerve, "eta")
    if (eta.p, eta.q) != (-1, 1):
        raise SchemaError("eta", "must have bidegree (-1, 1)")
    theta = None
    if data.get("theta") is not None:
        theta = tw_from_json(data["theta"], nerve, "theta")
        if (theta.p, theta.q) != (-1, 0):
            raise SchemaError("theta", "must have bidegree (-1, 0)")
    return nerve, eta, theta


def resolve_problem_from_json(data):
    _obj(data, "", ["schemaVersion", "nerve", "order"], ["element"])
    _version(data)
    k = _int(data["order"], "order", 0)
    nerve = nerve_from_json(data["nerve"], k)
    elem = tw_from_json(data["element"], nerve, "element") if data.get("element") is not None else None
    return nerve, elem
