"""Polynomial differential forms on the standard simplices.

On ``Delta^n`` the forms are ``Q[t_0..t_n, dt_0..dt_n]`` modulo ``1 - sum t_i``
and ``sum dt_i``.  We eliminate ``t_n`` and ``dt_n``, so a form is stored as a
sparse map ``(exponents of t_0..t_{n-1}, sorted dt indices) -> coefficient``.

Integration uses the coordinates ``(t_1, ..., t_n)`` with
``dt_1 ^ ... ^ dt_n`` positively oriented; with this choice

    int d(a) = sum_k (-1)^k int face_k(a).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from . import linalg
from .signs import merge_sign


# largest polynomial degree tried by apl_extend unless told otherwise
DEFAULT_CEILING = 16


class ResourceError(RuntimeError):
    pass


class PreconditionError(ValueError):
    pass


def _fr(c):
    return c if isinstance(c, Fraction) else Fraction(c)


def mono_mul(k1, k2):
    """Product of two form monomials: ``(sign, key)``; sign 0 if it vanishes."""
    s, dts = merge_sign(k1[1], k2[1])
    if not s:
        return 0, None
    return s, (tuple(a + b for a, b in zip(k1[0], k2[0])), dts)


class APLForm:
    """Homogeneous polynomial form of degree ``degree`` on ``Delta^n``."""

    __slots__ = ("n", "degree", "terms")

    def __init__(self, n, degree, terms=None):
        if n < 0 or degree < 0:
            raise ValueError("bad simplex dimension or degree")
        self.n = n
        self.degree = degree
        clean = {}
        for (e, dts), c in (terms or {}).items():
            c = _fr(c)
            if not c:
                continue
            if len(e) != n or len(dts) != degree or any(d < 0 or d >= n for d in dts):
                raise ValueError(f"bad form term {(e, dts)} on Delta^{n} in degree {degree}")
            if any(a < 0 for a in e) or list(dts) != sorted(set(dts)):
                raise ValueError(f"non-canonical form term {(e, dts)}")
            key = (tuple(e), tuple(dts))
            clean[key] = clean.get(key, 0) + c
        self.terms = {k: c for k, c in clean.items() if c}

    @classmethod
    def _raw(cls, n, degree, terms):
        f = cls.__new__(cls)
        f.n, f.degree, f.terms = n, degree, terms
        return f

    # constructors ---------------------------------------------------------
    @classmethod
    def const(cls, n, c=1):
        return cls(n, 0, {((0,) * n, ()): c})

    @classmethod
    def zero(cls, n, degree=0):
        return cls._raw(n, degree, {})

    @classmethod
    def t(cls, n, j):
        """The barycentric coordinate ``t_j`` (``t_n = 1 - sum``)."""
        if not 0 <= j <= n:
            raise ValueError("coordinate index out of range")
        if j < n:
            e = [0] * n
            e[j] = 1
            return cls(n, 0, {(tuple(e), ()): 1})
        terms = {((0,) * n, ()): 1}
        for i in range(n):
            e = [0] * n
            e[i] = 1
            terms[(tuple(e), ())] = -1
        return cls(n, 0, terms)

    @classmethod
    def dt(cls, n, j):
        if not 0 <= j <= n:
            raise ValueError("coordinate index out of range")
        if j < n:
            return cls(n, 1, {((0,) * n, (j,)): 1})
        return cls(n, 1, {((0,) * n, (i,)): -1 for i in range(n)})

    # protocol ---------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, APLForm):
            return NotImplemented
        if self.n != other.n:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return f"0[Delta^{self.n}]"
        parts = []
        for (e, dts), c in sorted(self.terms.items()):
            f = [f"t{i}^{a}" if a > 1 else f"t{i}" for i, a in enumerate(e) if a]
            f += [f"dt{i}" for i in dts]
            parts.append(f"{c}" + ("*" + "*".join(f) if f else ""))
        return " + ".join(parts) + f" [Delta^{self.n}]"

    def _check(self, other):
        if not isinstance(other, APLForm) or other.n != self.n:
            raise ValueError("forms live on different simplices")

    def __add__(self, other):
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if other.degree != self.degree:
            raise ValueError("adding forms of different degrees")
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                del out[k]
        return APLForm._raw(self.n, self.degree, out)

    def __neg__(self):
        return APLForm._raw(self.n, self.degree, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = _fr(c)
        if not c:
            return APLForm.zero(self.n, self.degree)
        return APLForm._raw(self.n, self.degree, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return apl_wedge(self, other)

    __rmul__ = scale

    def poly_degree(self):
        return max((sum(e) for e, _ in self.terms), default=0)


def apl_wedge(a, b):
    if a.n != b.n:
        raise ValueError("mismatched simplex dimensions")
    out = {}
    for k1, c1 in a.terms.items():
        for k2, c2 in b.terms.items():
            s, k = mono_mul(k1, k2)
            if s:
                out[k] = out.get(k, 0) + s * c1 * c2
    return APLForm._raw(a.n, a.degree + b.degree, {k: c for k, c in out.items() if c})


@lru_cache(maxsize=None)
def _d_mono(key):
    e, dts = key
    out = []
    for j, a in enumerate(e):
        if a and j not in dts:
            s, nd = merge_sign((j,), dts)
            ee = list(e)
            ee[j] -= 1
            out.append(((tuple(ee), nd), s * a))
    return tuple(out)


def apl_d(a):
    out = {}
    for k, c in a.terms.items():
        for kk, s in _d_mono(k):
            out[kk] = out.get(kk, 0) + s * c
    return APLForm._raw(a.n, a.degree + 1, {k: c for k, c in out.items() if c})


@lru_cache(maxsize=None)
def _face_images(n, k):
    """Images of the reduced coordinates of ``Delta^n`` under the k-th face."""
    m = n - 1
    ts, dts = [], []
    for j in range(n):
        if j == k:
            ts.append(APLForm.zero(m, 0))
            dts.append(APLForm.zero(m, 1))
        else:
            i = j if j < k else j - 1
            ts.append(APLForm.t(m, i))
            dts.append(APLForm.dt(m, i))
    return tuple(ts), tuple(dts)


@lru_cache(maxsize=200_000)
def _face_mono(n, k, key):
    ts, dts = _face_images(n, k)
    e, dd = key
    f = APLForm.const(n - 1)
    for j, a in enumerate(e):
        for _ in range(a):
            f = apl_wedge(f, ts[j])
            if not f:
                return ()
    for j in dd:
        f = apl_wedge(f, dts[j])
        if not f:
            return ()
    return tuple(f.terms.items())


def apl_face(a, k):
    n = a.n
    if n < 1 or not 0 <= k <= n:
        raise ValueError(f"face index {k} out of range on Delta^{n}")
    out = {}
    for key, c in a.terms.items():
        for kk, v in _face_mono(n, k, key):
            out[kk] = out.get(kk, 0) + c * v
    return APLForm._raw(n - 1, a.degree, {kk: v for kk, v in out.items() if v})


def apl_integrate(a):
    """Integral over ``Delta^n``; zero unless the degree is ``n``."""
    n = a.n
    if a.degree != n or not a.terms:
        return Fraction(0)
    total = Fraction(0)
    for (e, _), c in a.terms.items():
        num = 1
        for x in e:
            num *= factorial(x)
        total += c * Fraction(num, factorial(sum(e) + n))
    # dt_0 ^ ... ^ dt_{n-1} = (-1)^n dt_1 ^ ... ^ dt_n
    return total if n % 2 == 0 else -total


def _exponents(n, deg):
    """Exponent tuples of ``n`` variables with total degree exactly ``deg``."""
    if n == 0:
        if deg == 0:
            yield ()
        return
    if n == 1:
        yield (deg,)
        return
    for a in range(deg, -1, -1):
        for rest in _exponents(n - 1, deg - a):
            yield (a,) + rest


def _subsets(n, q):
    from itertools import combinations
    return list(combinations(range(n), q))


def faces_compatible(faces):
    """Check ``face_j(faces[k]) = face_k(faces[j+1])`` for ``j >= k``."""
    m = len(faces) - 1
    if m < 2:
        return True
    for k in range(m + 1):
        for j in range(k, m):
            if apl_face(faces[k], j) != apl_face(faces[j + 1], k):
                return False
    return True


def apl_extend(faces, degree_bound=None, ceiling=None):
    """A form on ``Delta^n`` with prescribed faces.

    ``faces[k]`` is the required ``k``-th face (a form on ``Delta^{n-1}``).
    The unknowns are the coefficients of all monomials of polynomial degree
    at most the current bound; columns are ordered by ascending degree so the
    canonical solution (free coefficients zero) is of minimal degree.  The
    bound starts at ``degree_bound`` (default: the largest face degree) and
    is raised until the system is solvable or ``ceiling`` is exceeded.
    """
    n = len(faces) - 1
    if n < 1:
        raise ValueError("need at least two faces")
    q = None
    for f in faces:
        if f.n != n - 1:
            raise ValueError("faces must live on Delta^(n-1)")
        if f.terms:
            if q is not None and f.degree != q:
                raise ValueError("faces of different degrees")
            q = f.degree
    if q is None:
        return APLForm.zero(n, faces[0].degree)
    if q > n:
        raise PreconditionError("degree exceeds simplex dimension")
    if not faces_compatible(faces):
        raise PreconditionError("face tuple is not compatible")
    if ceiling is None:
        ceiling = DEFAULT_CEILING
    start = max(f.poly_degree() for f in faces) if degree_bound is None else degree_bound
    for bound in range(start, ceiling + 1):
        cols = []
        for deg in range(bound + 1):
            for e in _exponents(n, deg):
                for s in _subsets(n, q):
                    cols.append((e, s))
        rows = {}
        for ci, key in enumerate(cols):
            for k in range(n + 1):
                for kk, v in _face_mono(n, k, key):
                    rows.setdefault((k, kk), {})[ci] = v
        eqs = set(rows)
        for k, f in enumerate(faces):
            for kk in f.terms:
                eqs.add((k, kk))
        eqs = sorted(eqs)
        rhs = [faces[k].terms.get(kk, 0) for (k, kk) in eqs]
        sol, _ = linalg.solve([rows.get(eq, {}) for eq in eqs], len(cols), rhs)
        if sol is not None:
            return APLForm(n, q, {cols[c]: v for c, v in sol.items()})
    raise ResourceError(f"apl_extend: no solution up to degree bound {ceiling}")


def bump(n):
    """``t_0 t_1 ... t_n`` on ``Delta^n``; vanishes on every face."""
    f = APLForm.const(n)
    for j in range(n + 1):
        f = apl_wedge(f, APLForm.t(n, j))
    return f


def forms_basis_size(n, q, bound):
    """Number of form monomials on ``Delta^n`` of degree q, poly degree <= bound."""
    return comb(bound + n, n) * comb(n, q)
