"""Exact Thom-Whitney models for log smooth deformation problems.

Modules, from the bottom up:

``exactalg``   rational polynomial rings with Laurent variables, truncated in the base
``apl``        polynomial differential forms on standard simplices
``gerst``      polyvector fields on a chart with a fixed derivation frame
``logdef``     log derivations, automorphisms, exp/log and BCH
``tw``         the Thom-Whitney resolution over a cover nerve
``pdgla``      the predifferential Lie algebra, its curvature and gauge action
``curve``      the log curve on the triangle of lines ``XYZ = 0``
``cli``        the ``logpdgla`` command

Everything is exact: coefficients are :class:`fractions.Fraction`.
"""

__version__ = "0.1.0"
