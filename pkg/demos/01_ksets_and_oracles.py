"""
k-sets and utility oracles
==========================

A k-set assigns some elements of a ground set to one of k positions.
Here the ground set is {a, b} and there are two positions ("topics").
"""

from pathlib import Path

from ksubcover import KSet, best_marginal, best_singleton, join, meet, precedes
from ksubcover.instances import read_instance
from ksubcover.oracles import CountingOracle

a, b = 0, 1
s = KSet(2, [(a, 1)])
t = KSet(2, [(a, 1), (b, 2)])
print("s =", s, " t =", t)
print("s below t:", precedes(s, t))

# Meet keeps agreements; join drops an element placed at two positions.
print("meet((a,1), (a,2)) =", meet(s, KSet(2, [(a, 2)])))
print("join((a,1), (a,2)) =", join(s, KSet(2, [(a, 2)])))
print("join((a,1), (b,2)) =", join(s, KSet(2, [(b, 2)])))

###############################################################################
# A coverage utility: each (element, position) covers a set of items and the
# utility is the total weight covered. The small instance ships as a file.

inst = read_instance(Path(__file__).parent / "data" / "i0.ksc")
g = inst.oracle()
print("g(empty) =", g(KSet.empty(2)))
print("g({(a,1)}) =", g(s))
print("g({(a,1),(b,1)}) =", g(KSet(2, [(a, 1), (b, 1)])))

###############################################################################
# Greedy steps query the best position for a new element. Wrapping the
# oracle in a counter shows each step costs exactly k queries.

counted = CountingOracle(g)
print("best singleton of a:", best_singleton(counted, a))
step = best_marginal(counted, s, b, base=g(s))
print("best marginal of b given s:", step)
print("queries used:", counted.queries)
