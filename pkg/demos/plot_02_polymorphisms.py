"""
Polymorphisms of 1-in-3 and NAE
===============================

Polymorphism search is a CSP in its own right: one variable per argument
tuple, one constraint per choice of relation tuples. The experiments below
show the pattern the hardness argument relies on. The pair (1-in-3, NAE)
has plenty of polymorphisms, yet none of them is cyclic at small prime
arities.
"""

import itertools

from pcspwb.core import RelationalStructure, builtin_template
from pcspwb.polymorphisms import (cyclic_survey, enumerate_polymorphisms, find_polymorphism,
                                  indicator_instance, is_cyclic, pseudo_siggers_search,
                                  threshold_table)

one_in_three = builtin_template("one-in-three")
nae = builtin_template("nae")

# The indicator instance for ternary cyclic operations on 1-in-3 has one
# variable per rotation orbit of {0,1}^3.
ind = indicator_instance(one_in_three, 3, "cyclic")
print("orbits:", len(ind.variables), "constraints:", len(ind.constraints))

# Counting polymorphisms of the pair at small arities.
for n in (1, 2, 3):
    polys = enumerate_polymorphisms(one_in_three, nae, n)
    cyc = sum(1 for s in polys if n > 1 and is_cyclic(s))
    print(f"arity {n}: {len(polys)} polymorphisms, {cyc} cyclic")

# The threshold "more than a third of the arguments are 1" works whenever
# 3 does not divide n. Odd primes other than 3 are such arities, but the
# threshold is only a polymorphism of the pair, not of either side.
for n in (4, 5, 7):
    s = threshold_table(n)
    print(f"threshold_{n} cyclic={is_cyclic(s)}")
print("(1-in-3, NAE) at 5:", find_polymorphism(one_in_three, nae, 5) is not None)

# Neither template alone has a cyclic polymorphism at prime arity <= 5.
print("1-in-3 survey:", cyclic_survey(one_in_three, None, 5))
print("NAE survey:   ", cyclic_survey(nae, None, 5))

# The pseudo-Siggers condition fails on 1-in-3 as well, but a structure
# whose relation is everything satisfies it trivially.
print("pseudo-Siggers on 1-in-3:", pseudo_siggers_search(one_in_three))
full = RelationalStructure(2, {"R": itertools.product((0, 1), repeat=3)}, {"R": 3})
w = pseudo_siggers_search(full)
print("pseudo-Siggers on full relation: alpha", w.alpha, "beta", w.beta, "ok", w.holds(full))
