"""Exact sparse linear algebra over the rationals."""
from fractions import Fraction


def solve(rows, ncols, rhs):
    """Solve ``A x = b`` exactly.

    ``rows`` is a list of sparse rows ``{col: Fraction}``, ``rhs`` the list of
    right-hand sides.  Columns are pivoted in increasing order, so earlier
    columns are preferred and free columns are set to zero.

    Returns ``(x, nullity)`` where ``x`` is a dict ``{col: value}`` or ``None``
    when the system is inconsistent.
    """
    pivots = {}  # col -> (row dict, rhs)
    order = []
    for row, b in zip(rows, rhs):
        r = {c: Fraction(v) for c, v in row.items() if v}
        b = Fraction(b)
        # reduce against existing pivots (in pivot order)
        while r:
            c = min(r)
            if c not in pivots:
                break
            prow, pb = pivots[c]
            f = r[c]
            for cc, vv in prow.items():
                nv = r.get(cc, 0) - f * vv
                if nv:
                    r[cc] = nv
                else:
                    r.pop(cc, None)
            b -= f * pb
        if not r:
            if b:
                return None, None
            continue
        c = min(r)
        inv = 1 / r[c]
        r = {cc: vv * inv for cc, vv in r.items()}
        b *= inv
        pivots[c] = (r, b)
        order.append(c)
    # back substitution with free variables zero
    x = {}
    for c in sorted(pivots, reverse=True):
        prow, pb = pivots[c]
        val = pb
        for cc, vv in prow.items():
            if cc != c:
                val -= vv * x.get(cc, 0)
        if val:
            x[c] = val
    return x, ncols - len(pivots)
