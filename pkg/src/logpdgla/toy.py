"""Small test geometries.

* :func:`torus_chart` is a two-generator chart ``k[x^+-1, y^+-1, t]`` with the
  non-abelian frame ``d_1 = x d_x``, ``d_2 = x y d_y`` (``[d_1, d_2] = d_2``).
* :func:`two_chart_nerve` covers ``k[x^+-1, t]`` by two charts whose overlap is
  glued by ``x -> x (1 + t x)``.
* :func:`triangle_nerve` has three charts, three overlaps and one triple
  overlap, so that ``TW^{-1,2}`` is nonzero.

Every chart is ``k[x^+-1, t]/(t^(k+1))`` with base ``t`` and frame ``x d_x``;
the vertex charts are written in their own coordinate and every overlap in a
common global coordinate.
"""
from __future__ import annotations

from .exactalg import ChartRing, PolyElement, RingHom
from .gerst import ChartMap, Generator, PolyvectorChart
from .logdef import LogChart
from .tw import CoverNerve

# vertex coordinate -> global coordinate (units times x)
VERTEX_MAPS = {"a": "x", "b": "x + t*x^2", "c": "x + t*x^-1"}


def line_ring(name, k):
    return ChartRing(name, ["x", "t"], [True, False], [(0, 1)], k)


def line_chart(name, k):
    R = line_ring(name, k)
    g = Generator("d", {"x": R.var("x"), "t": 0}, [0])
    return PolyvectorChart(name, R, [g], monoid=("e_t",))


def torus_chart(k):
    R = ChartRing("T", ["x", "y", "t"], [True, True, False], [(0, 0, 1)], k)
    x, y = R.var("x"), R.var("y")
    g1 = Generator("d_1", {"x": x, "y": 0, "t": 0}, [0])
    g2 = Generator("d_2", {"x": 0, "y": x * y, "t": 0}, [0])
    return PolyvectorChart("T", R, [g1, g2], monoid=("e_t",))


def log_chart(pchart):
    """Log chart with monoid generated by ``t`` alone."""
    R = pchart.ring
    alpha = [tuple(1 if v == "t" else 0 for v in R.variables)]
    return LogChart(pchart, alpha, [(1,)])


def invert_unipotent(h):
    """Inverse of a map which is the identity modulo the base ideal.

    ``h`` goes between rings with the same variables; the inverse is found
    by the fixed point ``psi(v) = psi(v) - (h(psi(v)) - v)``.
    """
    S, T = h.source, h.target
    psi = [T.var(v) for v in S.variables]
    for _ in range(S.order + 3):
        trial = RingHom(T, S, [PolyElement(S, dict(p.terms)) for p in psi])
        err = [h(trial(w)) - w for w in T.gens()]
        if not any(err):
            return trial
        psi = [p - e for p, e in zip(psi, err)]
    raise ArithmeticError("inverse iteration did not converge")


def _vertex_map(v, src, tgt):
    return RingHom(src.ring, tgt.ring, {"x": tgt.ring.parse(VERTEX_MAPS[v]), "t": tgt.ring.var("t")})


def _chart_map(v, src, tgt):
    hom = _vertex_map(v, src, tgt)
    return ChartMap(src, tgt, hom, invert_unipotent(hom))


def _identity_map(src, tgt):
    hom = RingHom(src.ring, tgt.ring, tgt.ring.gens())
    inv = RingHom(tgt.ring, src.ring, src.ring.gens())
    return ChartMap(src, tgt, hom, inv)


def _nerve(name, ids, simplices, k):
    charts = {s: line_chart("U_" + "".join(s), k) for s in simplices}
    cofaces = {}
    for s in simplices:
        if len(s) == 1:
            continue
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            if len(f) == 1:
                cofaces[(s, i)] = _chart_map(f[0], charts[f], charts[s])
            else:
                cofaces[(s, i)] = _identity_map(charts[f], charts[s])
    return CoverNerve(name, ids, charts, cofaces, k)


def two_chart_nerve(k):
    return _nerve("two-chart", ("a", "b"), [("a",), ("b",), ("a", "b")], k)


def triangle_nerve(k):
    simp = [("a",), ("b",), ("c",), ("a", "b"), ("a", "c"), ("b", "c"), ("a", "b", "c")]
    return _nerve("triangle", ("a", "b", "c"), simp, k)


def log_charts(nerve):
    return {s: log_chart(ch) for s, ch in nerve.charts.items()}
