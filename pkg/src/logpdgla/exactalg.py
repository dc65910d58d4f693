"""Exact sparse Laurent polynomials over finitely presented chart rings.

A :class:`ChartRing` is a quotient of a (partially Laurent) polynomial ring
over Q by a terminating monomial rewriting system together with the
nilpotent truncation of a base ideal.  The base ``Q[t_1..t_r]`` enters through
``base_images``: each ``t_i`` maps to a monomial of the chart, and every
monomial divisible by ``k + 1`` base monomials (counted with multiplicity) is
zero, where ``k`` is the truncation order.

Elements (:class:`PolyElement`) are immutable and always stored in normal
form.
"""
from __future__ import annotations

import itertools
import re
from fractions import Fraction

STEP_BUDGET = 200_000


class MalformedRingError(ValueError):
    pass


class DomainError(ValueError):
    pass


def _fr(c):
    return c if isinstance(c, Fraction) else Fraction(c)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class Rule:
    """A rewrite rule ``lhs -> rhs``; lhs an exponent tuple, rhs a term dict."""

    __slots__ = ("lhs", "rhs")

    def __init__(self, lhs, rhs):
        self.lhs = tuple(lhs)
        self.rhs = tuple(sorted((tuple(m), _fr(c)) for m, c in dict(rhs).items() if c))

    def key(self):
        return (self.lhs, self.rhs)

    def __eq__(self, other):
        return isinstance(other, Rule) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"Rule({self.lhs} -> {dict(self.rhs)})"


class ChartRing:
    """Finitely presented commutative Q-algebra over an Artin base.

    Parameters
    ----------
    name : str
    variables : sequence of str
    invertible : sequence of bool
        Laurent flag per variable.
    base_images : sequence of exponent tuples
        Image of each base variable ``t_i``; rank ``r = len(base_images)``.
    order : int
        Truncation order ``k``; the base ideal satisfies ``m^(k+1) = 0``.
    rules : sequence of Rule
        Extra rewrite rules, applied before truncation.
    """

    def __init__(self, name, variables, invertible, base_images, order, rules=()):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        self.name = str(name)
        self.variables = tuple(variables)
        self.invertible = tuple(bool(b) for b in invertible)
        if len(self.invertible) != len(self.variables):
            raise MalformedRingError("invertible flags do not match variables")
        if len(set(self.variables)) != len(self.variables):
            raise MalformedRingError("duplicate variable names")
        self.nvars = len(self.variables)
        self.base_images = tuple(tuple(b) for b in base_images)
        self.order = int(order)
        self.rules = tuple(rules)
        for r in self.rules:
            if len(r.lhs) != self.nvars:
                raise MalformedRingError(f"rule {r} has wrong arity")
        self._index = {v: i for i, v in enumerate(self.variables)}
        self._key = (self.name, self.variables, self.invertible, self.base_images,
                     self.order, tuple(r.key() for r in self.rules))
        self._hash = hash(self._key)
        # base monomials after rewriting; they must be monomials
        bm = []
        for b in self.base_images:
            terms = self._reduce_rules({b: Fraction(1)})
            if len(terms) != 1 or next(iter(terms.values())) != 1:
                raise MalformedRingError(f"base image {b} does not normalize to a monomial")
            m = next(iter(terms))
            if not any(e > 0 and not inv for e, inv in zip(m, self.invertible)):
                raise MalformedRingError("base image is a unit")
            bm.append(m)
        self.base_monomials = tuple(bm)
        self._count_cache = {}

    # identity ---------------------------------------------------------
    def __eq__(self, other):
        return self is other or (isinstance(other, ChartRing) and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"ChartRing({self.name!r}, {self.variables}, k={self.order})"

    @property
    def rank(self):
        return len(self.base_images)

    def index(self, var):
        return self._index[var]

    def with_order(self, k):
        if k < 0:
            raise ValueError("truncation order must be non-negative")
        if k == self.order:
            return self
        return ChartRing(self.name, self.variables, self.invertible, self.base_images, k, self.rules)

    def localized(self, names, suffix=None):
        """Same presentation with the given variables made invertible."""
        inv = tuple(b or v in names for v, b in zip(self.variables, self.invertible))
        nm = suffix if suffix is not None else self.name + "[" + ",".join(sorted(names)) + "^-1]"
        return ChartRing(nm, self.variables, inv, self.base_images, self.order, self.rules)

    # monomial bookkeeping ----------------------------------------------
    def _divides(self, lhs, m):
        for e, f, inv in zip(lhs, m, self.invertible):
            if e > 0 and not inv and f < e:
                return False
        return True

    def base_count(self, m):
        """Largest number of base monomials (with repetition) dividing ``m``."""
        c = self._count_cache.get(m)
        if c is not None:
            return c
        bms = self.base_monomials
        if len(bms) == 1:
            b = bms[0]
            c = min(f // e for e, f, inv in zip(b, m, self.invertible) if e > 0 and not inv)
            c = max(c, 0)
        else:
            c = self._count_search(m, 0)
        if len(self._count_cache) < 100_000:
            self._count_cache[m] = c
        return c

    def _count_search(self, m, start):
        best = 0
        for i in range(start, len(self.base_monomials)):
            b = self.base_monomials[i]
            if self._divides(b, m):
                best = max(best, 1 + self._count_search(_sub(m, b), i))
        return best

    def _reduce_rules(self, terms):
        out = {}
        stack = list(terms.items())
        steps = 0
        rules = self.rules
        while stack:
            m, c = stack.pop()
            for r in rules:
                if self._divides(r.lhs, m):
                    rest = _sub(m, r.lhs)
                    for rm, rc in r.rhs:
                        stack.append((_add(rest, rm), c * rc))
                    steps += 1
                    if steps > STEP_BUDGET:
                        raise MalformedRingError(f"rewriting in {self.name} exceeded the step budget")
                    break
            else:
                v = out.get(m, 0) + c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return out

    def normalize_terms(self, terms):
        """Normal form of a raw term dict (exponent tuple -> coefficient)."""
        for m in terms:
            for e, inv in zip(m, self.invertible):
                if e < 0 and not inv:
                    raise DomainError(f"negative exponent on a non-invertible variable of {self.name}")
        if self.rules:
            terms = self._reduce_rules(terms)
        k = self.order
        return {m: c for m, c in terms.items() if c and self.base_count(m) <= k}

    def is_monomial_nilpotent(self, m):
        p = m
        for _ in range(7):
            if not self.normalize_terms({p: Fraction(1)}):
                return True
            p = _add(p, p)
        return False

    # constructors -------------------------------------------------------
    def zero(self):
        return PolyElement(self, {})

    def one(self):
        return PolyElement(self, {(0,) * self.nvars: Fraction(1)})

    def const(self, c):
        return PolyElement(self, {(0,) * self.nvars: _fr(c)})

    def var(self, name):
        e = [0] * self.nvars
        e[self._index[name]] = 1
        return PolyElement(self, {tuple(e): Fraction(1)})

    def gens(self):
        return tuple(self.var(v) for v in self.variables)

    def monomial(self, exps, coeff=1):
        if isinstance(exps, dict):
            e = [0] * self.nvars
            for v, a in exps.items():
                e[self._index[v]] = a
            exps = tuple(e)
        return PolyElement(self, {tuple(exps): _fr(coeff)})

    def base(self, i=0):
        """The image of the base variable ``t_i``."""
        return PolyElement(self, {self.base_images[i]: Fraction(1)})

    def parse(self, text):
        return PolyElement(self, parse_terms(text, self))

    def element(self, x):
        """Coerce ``x`` (PolyElement, number or string) into this ring."""
        if isinstance(x, PolyElement):
            if x.ring != self:
                raise ValueError(f"element of {x.ring.name} used in {self.name}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)

    # presentation checks -----------------------------------------------
    def critical_pairs(self):
        """Check local confluence on all overlaps of rule left-hand sides.

        Returns a list of failing monomials (empty when locally confluent).
        Truncation rules ``b^a -> 0`` with ``|a| = k+1`` are included.
        """
        lhs = [(r.lhs, dict(r.rhs)) for r in self.rules]
        for alpha in _compositions(self.order + 1, self.rank):
            m = (0,) * self.nvars
            for a, b in zip(alpha, self.base_monomials):
                m = _add(m, tuple(a * x for x in b))
            lhs.append((m, {}))
        bad = []
        for (l1, r1), (l2, r2) in itertools.combinations(lhs, 2):
            lcm = tuple(max(a, b) for a, b in zip(l1, l2))
            one = {}
            for rm, rc in r1.items():
                mm = _add(_sub(lcm, l1), rm)
                one[mm] = one.get(mm, 0) + rc
            two = {}
            for rm, rc in r2.items():
                mm = _add(_sub(lcm, l2), rm)
                two[mm] = two.get(mm, 0) + rc
            if self.normalize_terms(one) != self.normalize_terms(two):
                bad.append(lcm)
        return bad

    # serialization --------------------------------------------------------
    def to_json(self):
        return {
            "name": self.name,
            "variables": [{"name": v, "invertible": b} for v, b in zip(self.variables, self.invertible)],
            "base": {"rank": self.rank, "order": self.order,
                     "images": [format_terms(self, {b: Fraction(1)}) for b in self.base_images]},
            "rules": [{"lhs": format_terms(self, {r.lhs: Fraction(1)}),
                       "rhs": format_terms(self, dict(r.rhs))} for r in self.rules],
        }

    @classmethod
    def from_json(cls, data, order=None):
        _check_keys(data, {"name", "variables", "base", "rules"}, "ring")
        names = [v["name"] for v in data["variables"]]
        inv = [bool(v.get("invertible", False)) for v in data["variables"]]
        base = data["base"]
        _check_keys(base, {"rank", "order", "images"}, "ring.base")
        k = base["order"] if order is None else order
        scratch = ChartRing("scratch", names, inv, [], 0)
        images = []
        for s in base["images"]:
            t = parse_terms(s, scratch)
            if len(t) != 1:
                raise ValueError("ring.base.images: each image must be a monomial")
            images.append(next(iter(t)))
        if "rank" in base and base["rank"] != len(images):
            raise ValueError("ring.base.rank does not match the number of images")
        rules = []
        for r in data.get("rules", []):
            lt = parse_terms(r["lhs"], scratch)
            if len(lt) != 1:
                raise ValueError("ring.rules.lhs must be a monomial")
            rules.append(Rule(next(iter(lt)), parse_terms(r["rhs"], scratch)))
        return cls(data.get("name", "R"), names, inv, images, k, rules)


def _check_keys(data, allowed, where):
    if not isinstance(data, dict):
        raise ValueError(f"{where}: expected an object")
    extra = set(data) - set(allowed)
    if extra:
        raise ValueError(f"{where}: unknown field(s) {sorted(extra)}")


def _compositions(total, parts):
    if parts == 0:
        return
    if parts == 1:
        yield (total,)
        return
    for i in range(total + 1):
        for rest in _compositions(total - i, parts - 1):
            yield (i,) + rest


class PolyElement:
    """Immutable element of a :class:`ChartRing`, stored in normal form."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms, normalized=False):
        self.ring = ring
        if not normalized:
            clean = {}
            for m, c in terms.items():
                c = _fr(c)
                if c:
                    m = tuple(m)
                    clean[m] = clean.get(m, 0) + c
            terms = ring.normalize_terms(clean)
        self.terms = terms
        self._hash = None

    # basic protocol ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, PolyElement):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        return format_terms(self.ring, self.terms)

    __str__ = __repr__

    def _coerce(self, other):
        if isinstance(other, PolyElement):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError(f"ring mismatch: {self.ring.name} vs {other.ring.name}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    # arithmetic ------------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                del out[m]
        return PolyElement(self.ring, out, normalized=True)

    __radd__ = __add__

    def __neg__(self):
        return PolyElement(self.ring, {m: -c for m, c in self.terms.items()}, normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = _fr(c)
        if not c:
            return self.ring.zero()
        return PolyElement(self.ring, {m: v * c for m, v in self.terms.items()}, normalized=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.terms or not o.terms:
            return self.ring.zero()
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = _add(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return PolyElement(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / _fr(other))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.ring.element(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # structure -------------------------------------------------------------
    def base_order(self):
        """Largest ``n`` with ``self`` in ``I^n`` (``None`` for zero)."""
        if not self.terms:
            return None
        return min(self.ring.base_count(m) for m in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def degree(self):
        """Total degree: the largest sum of absolute exponents."""
        return max((sum(abs(e) for e in m) for m in self.terms), default=0)

    def _unit_split(self):
        lead = [(m, c) for m, c in self.terms.items() if not self.ring.is_monomial_nilpotent(m)]
        if len(lead) != 1:
            return None
        m, c = lead[0]
        if any(e and not inv for e, inv in zip(m, self.ring.invertible)):
            return None
        return m, c

    def is_unit(self):
        return self._unit_split() is not None

    def inverse(self):
        split = self._unit_split()
        if split is None:
            raise DomainError(f"{self} is not a unit of {self.ring.name}")
        m, c = split
        lead_inv = PolyElement(self.ring, {tuple(-e for e in m): 1 / c})
        n = self * lead_inv - 1  # nilpotent
        out = self.ring.one()
        p = self.ring.one()
        for _ in range(STEP_BUDGET):
            p = -(p * n)
            if not p:
                break
            out = out + p
        else:  # pragma: no cover
            raise MalformedRingError("unit inversion did not terminate")
        return out * lead_inv

    def truncate(self, k):
        """Image in the same presentation with truncation order ``k``."""
        return truncate_base(self, k)


def normal_form(x):
    """Normal form of ``x``; elements are kept normalized, so this re-checks it."""
    return PolyElement(x.ring, dict(x.terms))


def truncate_base(x, k):
    if k < 0:
        raise ValueError("truncation order must be non-negative")
    if k > x.ring.order:
        raise ValueError("cannot raise the truncation order")
    r = x.ring.with_order(k)
    if r is x.ring:
        return x
    return PolyElement(r, dict(x.terms))


def ideal_membership(x, power):
    """Whether ``x`` lies in ``I^power`` (``I^0`` is the whole ring)."""
    if power < 0:
        raise ValueError("power must be non-negative")
    return all(x.ring.base_count(m) >= power for m in x.terms)


def apply_derivation(action, x):
    """Apply the derivation with values ``action[i]`` on variable ``i`` to ``x``."""
    ring = x.ring
    out = {}
    for m, c in x.terms.items():
        for i, e in enumerate(m):
            if not e:
                continue
            a = action[i]
            if not a.terms:
                continue
            mm = list(m)
            mm[i] -= 1
            mm = tuple(mm)
            f = c * e
            for am, ac in a.terms.items():
                k = _add(mm, am)
                out[k] = out.get(k, 0) + f * ac
    return PolyElement(ring, {m: c for m, c in out.items() if c})


class RingHom:
    """A ring map given by images of the source variables."""

    def __init__(self, source, target, images, name=""):
        self.source = source
        self.target = target
        if isinstance(images, dict):
            images = [images[v] for v in source.variables]
        imgs = tuple(target.element(x) for x in images)
        if len(imgs) != source.nvars:
            raise ValueError("one image per source variable required")
        self.images = imgs
        self.name = name
        self._inv = [None] * source.nvars

    def __repr__(self):
        body = ", ".join(f"{v}->{x}" for v, x in zip(self.source.variables, self.images))
        return f"RingHom({self.source.name}->{self.target.name}: {body})"

    def _neg_image(self, i):
        if self._inv[i] is None:
            try:
                self._inv[i] = self.images[i].inverse()
            except DomainError:
                raise DomainError(
                    f"image of {self.source.variables[i]} is not a unit of {self.target.name}") from None
        return self._inv[i]

    def apply_monomial(self, m, cache=None):
        out = self.target.one()
        for i, e in enumerate(m):
            if e == 0:
                continue
            key = (i, e)
            if cache is not None and key in cache:
                p = cache[key]
            else:
                base = self.images[i] if e > 0 else self._neg_image(i)
                p = base ** abs(e)
                if cache is not None:
                    cache[key] = p
            out = out * p
        return out

    def __call__(self, x):
        x = self.source.element(x)
        cache = self.__dict__.setdefault("_pow_cache", {})
        acc = {}
        for m, c in x.terms.items():
            img = self.apply_monomial(m, cache)
            for mm, cc in img.terms.items():
                acc[mm] = acc.get(mm, 0) + c * cc
        return PolyElement(self.target, {m: c for m, c in acc.items() if c}, normalized=True)

    def compose(self, first):
        """``self o first``."""
        return RingHom(first.source, self.target, [self(x) for x in first.images])

    def truncated(self, k):
        src = self.source.with_order(k)
        tgt = self.target.with_order(k)
        return RingHom(src, tgt, [truncate_base(x, k) for x in self.images], self.name)

    def base_compatible(self):
        if self.source.rank != self.target.rank:
            return False
        return all(self.apply_monomial(b) == self.target.base(i) for i, b in enumerate(self.source.base_images))


def hom_apply(h, x):
    return h(x)


def check_hom(h, inverse=None):
    """Validation report for a ring map (and optionally an inverse candidate)."""
    report = {"valid": True, "base_compatible": False, "units": True, "failures": []}
    for r in h.source.rules:
        diff = h.apply_monomial(r.lhs) - h(PolyElement(h.source, dict(r.rhs)))
        if diff:
            report["valid"] = False
            report["failures"].append(f"relation {format_terms(h.source, {r.lhs: 1})} -> "
                                      f"{format_terms(h.source, dict(r.rhs))} maps to {diff}")
    for alpha in _compositions(h.source.order + 1, h.source.rank):
        m = (0,) * h.source.nvars
        for a, b in zip(alpha, h.source.base_monomials):
            m = _add(m, tuple(a * x for x in b))
        img = h.apply_monomial(m)
        if img:
            report["valid"] = False
            report["failures"].append(f"relation {format_terms(h.source, {m: 1})} = 0 maps to {img}")
    for i, inv in enumerate(h.source.invertible):
        if inv and not h.images[i].is_unit():
            report["units"] = False
            report["valid"] = False
            report["failures"].append(f"image of invertible {h.source.variables[i]} is not a unit")
    try:
        report["base_compatible"] = h.base_compatible()
    except DomainError:
        report["base_compatible"] = False
    if inverse is not None:
        ok = all(inverse(h(v)) == v for v in h.source.gens()) and \
            all(h(inverse(w)) == w for w in h.target.gens())
        report["inverse"] = ok
        if not ok:
            report["valid"] = False
            report["failures"].append("inverse candidate is not a two-sided inverse")
    return report


# text format -------------------------------------------------------------

def format_terms(ring, terms):
    """Canonical text form; terms sorted lexicographically by exponent (descending)."""
    if not terms:
        return "0"
    parts = []
    for m in sorted(terms, reverse=True):
        c = _fr(terms[m])
        factors = []
        for v, e in zip(ring.variables, m):
            if e == 1:
                factors.append(v)
            elif e:
                factors.append(f"{v}^{e}")
        mono = "*".join(factors)
        if not mono:
            s = str(abs(c))
        elif abs(c) == 1:
            s = mono
        else:
            s = f"{abs(c)}*{mono}"
        parts.append(("-" if c < 0 else "+", s))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sgn, s in parts[1:]:
        out += f" {sgn} {s}"
    return out


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|(/)|([+-])|(\()|(\)))")


def parse_terms(text, ring):
    """Parse ``"3/2*y^2*z^-1 - x + 1"`` style text into a term dict.

    Products of numbers and variable powers, ``/`` by a variable power, and
    parenthesized sums are supported.
    """
    toks = []
    pos = 0
    text = str(text)
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
        pos = mt.end()
        kinds = ("num", "var", "^", "*", "/", "sign", "(", ")")
        for kind, g in zip(kinds, mt.groups()):
            if g is not None:
                toks.append((kind, g))
                break
    n = ring.nvars
    zero = (0,) * n

    def mul(a, b):
        out = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = _add(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return {m: c for m, c in out.items() if c}

    i = 0

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    def take():
        nonlocal i
        if i >= len(toks):
            raise ValueError(f"unexpected end of polynomial {text!r}")
        i += 1
        return toks[i - 1]

    def expr():
        out = {}
        sign = 1
        first = True
        while True:
            k, g = peek()
            if k == "sign":
                take()
                sign = -1 if g == "-" else 1
            elif not first:
                break
            t = term()
            for m, c in t.items():
                out[m] = out.get(m, 0) + sign * c
            sign = 1
            first = False
            if peek()[0] != "sign":
                break
        return {m: c for m, c in out.items() if c}

    def power_exp():
        k, g = peek()
        s = 1
        if k == "sign":
            take()
            s = -1 if g == "-" else 1
        k, g = take()
        if k != "num" or "/" in g:
            raise ValueError(f"bad exponent in {text!r}")
        return s * int(g)

    def factor():
        k, g = take()
        if k == "num":
            try:
                return {zero: Fraction(g)}
            except ZeroDivisionError:
                raise ValueError(f"division by zero in {text!r}") from None
        if k == "var":
            if g not in ring._index:
                raise ValueError(f"unknown variable {g!r} in {text!r}")
            e = 1
            if peek()[0] == "^":
                take()
                e = power_exp()
            m = [0] * n
            m[ring._index[g]] = e
            return {tuple(m): Fraction(1)}
        if k == "(":
            v = expr()
            if take()[0] != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            if peek()[0] == "^":
                take()
                e = power_exp()
                if e < 0:
                    raise ValueError("negative powers of sums are not supported")
                out = {zero: Fraction(1)}
                for _ in range(e):
                    out = mul(out, v)
                return out
            return v
        raise ValueError(f"unexpected token {g!r} in {text!r}")

    def term():
        t = factor()
        while peek()[0] in ("*", "/"):
            k, _ = take()
            f = factor()
            if k == "/":
                if len(f) != 1:
                    raise ValueError("division only by monomials")
                (m, c), = f.items()
                if not c:
                    raise ValueError(f"division by zero in {text!r}")
                f = {tuple(-e for e in m): 1 / c}
            t = mul(t, f)
        return t

    if not toks:
        return {}
    res = expr()
    if i != len(toks):
        raise ValueError(f"trailing input in polynomial {text!r}")
    return res
