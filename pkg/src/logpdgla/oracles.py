"""Independent reference computations used by the property suites.

None of these share code paths with the structures they check:

* polyvectors are evaluated as alternating multiderivations and bracketed
  with the shuffle formula for the Schouten-Nijenhuis bracket;
* BCH is checked against exponentials of strictly upper triangular matrices;
* integrals over simplices are computed by iterated one-variable integration.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial

from .exactalg import apply_derivation
from .signs import sort_sign


# multiderivations ---------------------------------------------------------------------

def _perm_sign(perm):
    s, _ = sort_sign(perm)
    return s


def evaluate(x, args):
    """Value of the polyvector ``x`` of degree ``-p`` on ``p`` ring elements."""
    ch = x.chart
    R = ch.ring
    p = -x.degree
    if len(args) != p:
        raise ValueError("wrong number of arguments")
    total = R.zero()
    for w, c in x.terms.items():
        if p == 0:
            total = total + c
            continue
        for perm in itertools.permutations(range(p)):
            t = c.scale(_perm_sign(perm))
            for j in range(p):
                t = t * apply_derivation(ch.generators[w[j]].action, args[perm[j]])
                if not t:
                    break
            total = total + t
    return total


def _shuffles(a, b):
    """``(sign, order)`` for all (a, b)-shuffles of ``range(a + b)``."""
    for first in itertools.combinations(range(a + b), a):
        rest = tuple(i for i in range(a + b) if i not in first)
        order = first + rest
        yield _perm_sign(order), order


def schouten_eval(x, y, args):
    """Schouten-Nijenhuis bracket of two multiderivations evaluated on ``args``.

    ``[P, Q](f) = sum_{Sh(q, p-1)} sgn P(Q(f..), f..)
                - (-1)^((p-1)(q-1)) sum_{Sh(p, q-1)} sgn Q(P(f..), f..)``
    """
    p, q = -x.degree, -y.degree
    R = x.chart.ring
    total = R.zero()
    if q >= 1 or p >= 1:
        if p >= 1:
            for sgn, order in _shuffles(q, p - 1):
                inner = evaluate(y, [args[i] for i in order[:q]])
                total = total + evaluate(x, [inner] + [args[i] for i in order[q:]]).scale(sgn)
        if q >= 1:
            sign = (-1) ** ((p - 1) * (q - 1))
            for sgn, order in _shuffles(p, q - 1):
                inner = evaluate(x, [args[i] for i in order[:p]])
                total = total - evaluate(y, [inner] + [args[i] for i in order[p:]]).scale(sign * sgn)
    return total


def schouten_sign(p, q):
    """Sign relating the package bracket of a p-vector and a q-vector to the shuffle formula.

    The polyvector bracket is the negated Schouten-Nijenhuis bracket in the
    grading where a p-vector has degree ``-p``; against the shuffle formula
    (which grades by ``p - 1``) this becomes ``-(-1)^((p+1)(q+1))``.
    """
    return -(-1) ** ((p + 1) * (q + 1))


def bracket_matches_schouten(bracket, x, y):
    """Compare ``bracket(x, y)`` with the signed shuffle formula on all variable tuples.

    Returns ``None`` or a description of the first mismatch.
    """
    R = x.chart.ring
    z = bracket(x, y)
    p, q = -x.degree, -y.degree
    n = p + q - 1
    if n < 0:
        return None if not z else f"bracket of functions is {z}"
    for args in itertools.product(R.gens(), repeat=n):
        want = schouten_eval(x, y, list(args)).scale(schouten_sign(p, q))
        got = evaluate(z, list(args))
        if got != want:
            return f"on {args}: bracket gives {got}, Schouten-Nijenhuis gives {want}"
    return None


# nilpotent matrices -------------------------------------------------------------------

def mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def mat_add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(a, c):
    return [[x * c for x in r] for r in a]


def mat_exp(a):
    n = len(a)
    total = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    term = total
    for k in range(1, n + 1):
        term = mat_scale(mat_mul(term, a), Fraction(1, k))
        total = mat_add(total, term)
    return total


def mat_log(a):
    n = len(a)
    one = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    x = mat_add(a, mat_scale(one, -1))
    total = [[Fraction(0)] * n for _ in range(n)]
    power = one
    for k in range(1, n + 1):
        power = mat_mul(power, x)
        total = mat_add(total, mat_scale(power, Fraction((-1) ** (k - 1), k)))
    return total


class Matrix:
    """Minimal exact square matrix with the operations ``bch_general`` needs."""

    def __init__(self, rows):
        self.rows = [[Fraction(x) for x in r] for r in rows]

    def __add__(self, other):
        return Matrix(mat_add(self.rows, other.rows))

    def __sub__(self, other):
        return Matrix(mat_add(self.rows, mat_scale(other.rows, -1)))

    def scale(self, c):
        return Matrix(mat_scale(self.rows, Fraction(c)))

    def __bool__(self):
        return any(x for r in self.rows for x in r)

    def __eq__(self, other):
        return self.rows == other.rows


def commutator(a, b):
    return Matrix(mat_add(mat_mul(a.rows, b.rows), mat_scale(mat_mul(b.rows, a.rows), -1)))


def random_nilpotent(rng, n):
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return Matrix(rows)


def bch_reference(a, b):
    return Matrix(mat_log(mat_mul(mat_exp(a.rows), mat_exp(b.rows))))


# integration over simplices -----------------------------------------------------------

def _poly_mul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def simplex_integral(poly, n):
    """``int f dt_0 ... dt_(n-1)`` over ``t_i >= 0, sum t_i <= 1``, by iterated integration.

    ``poly`` maps exponent tuples of length ``n`` to rationals.  Innermost
    variable first: ``int_0^(1 - s) t^a dt = (1 - s)^(a+1) / (a + 1)`` with
    ``s`` the sum of the remaining variables, expanded binomially.
    """
    cur = {m: Fraction(c) for m, c in poly.items()}
    for j in range(n - 1, -1, -1):
        nxt = {}
        for m, c in cur.items():
            a = m[j]
            # (1 - s)^(a+1) with s = t_0 + ... + t_(j-1)
            expansion = {(0,) * n: Fraction(1)}
            one_minus = {(0,) * n: Fraction(1)}
            for i in range(j):
                e = [0] * n
                e[i] = 1
                one_minus[tuple(e)] = Fraction(-1)
            for _ in range(a + 1):
                expansion = _poly_mul(expansion, one_minus)
            base = list(m)
            base[j] = 0
            term = _poly_mul({tuple(base): c / (a + 1)}, expansion)
            for mm, cc in term.items():
                nxt[mm] = nxt.get(mm, 0) + cc
        cur = {m: c for m, c in nxt.items() if c}
    return cur.get((0,) * n, Fraction(0))


def integrate_form(form):
    """Integral of a top-degree form in the orientation used by :mod:`logpdgla.apl`."""
    n = form.n
    if form.degree != n:
        return Fraction(0)
    poly = {}
    for (e, dts), c in form.terms.items():
        poly[e] = poly.get(e, 0) + c
    return (-1) ** n * simplex_integral(poly, n)


def dirichlet(a):
    """``prod a_i! / (|a| + n)!`` for reference in tests."""
    n = len(a)
    num = 1
    for x in a:
        num *= factorial(x)
    return Fraction(num, factorial(sum(a) + n))


__all__ = ["evaluate", "schouten_eval", "schouten_sign", "bracket_matches_schouten", "Matrix", "commutator",
           "random_nilpotent", "bch_reference", "simplex_integral", "integrate_form", "dirichlet", "comb"]
