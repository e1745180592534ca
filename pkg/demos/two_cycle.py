"""
Determinants on a graph with a cycle
====================================

With a directed cycle the minors of the covariance matrix are rational.
Numerator and denominator are both sums over trek-flow classes, and the
denominator class of the cycle gets coefficient -2 from one up-down cycle.
"""

from trekdet import MixedGraph, det_rational, enumerate_trek_flows, oracle_compare
from trekdet.flows import trek_flow_monomial, trek_flow_sign, up_down_cycles
from trekdet.polynomial import monomial_string

g = MixedGraph((1, 2), frozenset({(1, 2), (2, 1)}))
num, den = det_rational(g, (1,), (1,))
print("numerator  :", num.canonical_string())
print("denominator:", den.canonical_string())

###############################################################################
# The four trek flows with no paths at all: a cycle on neither side, either
# side, or both

for t in enumerate_trek_flows(g.directed_part, (), ()):
    print(
        f"sign={trek_flow_sign(t, (), ()):+d}",
        f"ud={len(up_down_cycles(t))}",
        monomial_string(trek_flow_monomial(t)),
    )

###############################################################################
# The brute-force matrix inverse agrees

print("oracle agrees:", oracle_compare(g, (1,), (1,)))
