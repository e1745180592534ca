"""
Vanishing minors and trek separation
====================================

A minor vanishes identically exactly when no trek flow connects the two
vertex sets.  Here the chain 1 -> 2 -> 3 makes every trek between {1} and
{3} pass through 2.
"""

import itertools

from trekdet import MixedGraph, trek_separated
from trekdet.oracle import oracle_determinant

g = MixedGraph((1, 2, 3, 4), frozenset({(1, 2), (2, 3), (4, 3)}))
for A, B in [((1, 4), (3, 4)), ((1, 2), (3, 4)), ((1,), (4,)), ((1,), (3,))]:
    sep = trek_separated(g, A, B)
    zero = oracle_determinant(g, A, B).is_zero()
    print(f"A={A} B={B} separated={sep} minor is zero={zero}")

###############################################################################
# Every 2x2 minor that vanishes

for A in itertools.combinations(g.vertices, 2):
    for B in itertools.combinations(g.vertices, 2):
        if trek_separated(g, A, B):
            print("vanishing:", A, B)
