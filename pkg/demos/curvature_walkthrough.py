"""The curvature element of a twisted predifferential.

On the triangle nerve, ``d + [eta, -]`` squares to ``[ell, -]`` with
``ell = d eta + 1/2 [eta, eta]``.  This script recomputes ell by a direct
solve and shows that no other candidate works.

    python demos/curvature_walkthrough.py [seed]
"""
import random
import sys
from fractions import Fraction

from logpdgla import sampling
from logpdgla.apl import APLForm, apl_wedge, bump
from logpdgla.pdgla import PDGLA, find_ell
from logpdgla.toy import triangle_nerve
from logpdgla.tw import pure, tw_bracket, tw_d, tw_minus_one_nonzero

rng = random.Random(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
nerve = triangle_nerve(2)
L = PDGLA(nerve)
eta = sampling.nilpotent_tw(nerve, -1, 1, rng)
M = L.twisted(eta)

expected = tw_d(eta) + tw_bracket(eta, eta).scale(Fraction(1, 2))
print("eta =", eta)
print("ell =", M.ell)
print("ell = d eta + 1/2 [eta, eta]:", M.ell == expected)
print("recomputing gives the same element:", find_ell(M) == M.ell)

# a nonzero perturbation supported on the triangle
top = ("a", "b", "c")
form = apl_wedge(bump(2), apl_wedge(APLForm.dt(2, 0), APLForm.dt(2, 1)))
ch = nerve.charts[top]
delta = pure(nerve, top, form, ch.gen(0, ch.ring.base(0)))
s, var, x, val = tw_minus_one_nonzero(delta)
print(f"ell + delta fails at the probe on {s} built from {var}:", M.d(M.d(x)) != tw_bracket(M.ell + delta, x))
