"""Gauge transformations on the triangle nerve.

Twists the plain pdgla by a random eta, applies a random gauge element theta
and shows that the Maurer-Cartan residual moves by exp(theta).

    python demos/gauge_walkthrough.py [seed]
"""
import random
import sys

from logpdgla import sampling
from logpdgla.pdgla import PDGLA, exp_theta, gauge_action, gauge_equivalent, mc_residual
from logpdgla.toy import triangle_nerve

rng = random.Random(int(sys.argv[1]) if len(sys.argv) > 1 else 0)
small = {"nterms": 1, "maxdeg": 1}
nerve = triangle_nerve(1)
L = PDGLA(nerve)

eta = L.zero(1)
while not eta:
    eta = sampling.nilpotent_tw(nerve, -1, 1, rng, **small)
theta = sampling.nilpotent_tw(nerve, -1, 0, rng, **small)
new = gauge_action(L, theta, eta)

print("eta   =", eta)
print("theta =", theta)
print("theta . eta =", new)

r_old, r_new = mc_residual(L, eta), mc_residual(L, new)
print("residual of eta is zero:", not r_old)
print("residual moves by exp(theta):", r_new == exp_theta(L, theta, r_old))
print("gauge_equivalent confirms:", gauge_equivalent(L, new, eta, theta)[0])
print("theta^-1 undoes it:", gauge_action(L, theta.scale(-1), new) == eta)
