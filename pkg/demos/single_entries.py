"""
Covariance entries as sums over treks
=====================================

In a DAG every covariance entry is a polynomial.  Treks with the same
monomial are related by tailswaps, and a whole class collapses to one
representative carrying the coefficient ``2^(i - e)``.
"""

from trekdet import MixedGraph, enumerate_treks, sigma_entry_collapsed, sigma_entry_truncated, trek_monomial
from trekdet.polynomial import canonical_string, monomial_string
from trekdet.treks import tailswap_class, trek_stats

# a=1 forks at b=2 into two routes to c=3, which forks again into two routes to e=5
edges = [(1, 2), (2, 3), (2, 4), (4, 3), (3, 5), (3, 6), (6, 5), (5, 7), (5, 8)]
g = MixedGraph(tuple(range(1, 9)), frozenset(edges))

print("sigma_7_8 =", canonical_string(sigma_entry_truncated(g, 7, 8)))
print(len(enumerate_treks(g, 7, 8)), "treks from 7 to 8")

###############################################################################
# Each tailswap class is kept once, with its coefficient

for rep, coeff in sigma_entry_collapsed(g, 7, 8):
    st = trek_stats(rep)
    print(f"{coeff:>2} * {monomial_string(trek_monomial(rep))}   i={st.i_count} e={st.e_count}")

###############################################################################
# The class of a trek whose sides meet three times and share one edge

from trekdet import Trek

t = Trek((1, 2, 3, 5, 7), (1, 2, 4, 3, 6, 5, 8))
for member in tailswap_class(t):
    print("  left", member.left, " right", member.right)
