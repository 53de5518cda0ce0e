"""
Solving 1-in-3 versus NAE through x + y + z = 1
===============================================

A triple instance is a promise problem here: if some assignment puts
exactly one 1 in every triple we must say yes, and if no not-all-equal
assignment exists we must say no. Replacing every triple by the equation
x + y + z = 1 and solving over the integers decides it.
"""

from pcspwb.linear import hermite_normal_form, solve_integer_system
from pcspwb.pcsp13 import (TripleInstance, gen_planted, round_integer, solve_pcsp,
                           triples_to_system, verify_assignment)

# A tiny instance: two triples sharing the variables y and z.
X = TripleInstance(None, [("x", "y", "z"), ("y", "z", "w")])
system = triples_to_system(X)
print("rows:", system.A, "rhs:", system.b)

# The Hermite normal form gives every integer solution at once:
# a particular point plus a lattice of homogeneous directions.
H, U = hermite_normal_form(system.A)
print("H =", H)
space = solve_integer_system(system)
print("particular:", space.particular, "lattice rank:", space.rank)

# Rounding positive values to 1 and the rest to 0 can never produce an
# all-equal triple, because three nonpositive or three positive integers
# cannot sum to 1.
psi = round_integer(space.point([3, -2]))
print("rounded:", dict(zip(X.variables, psi)), verify_assignment(X, psi, "nae"))

# A triple (x, x, x) turns into 3x = 1, which has no integer solution.
print("(x,x,x):", solve_pcsp(TripleInstance(None, [("x", "x", "x")])).label)

# The rational route solves over Q avoiding 1/3 and thresholds at 1/3.
# Both routes must agree whenever the instance is 1-in-3 satisfiable.
inst, plant = gen_planted(200, 400, seed=3)
for method in ("integers", "rationals"):
    ans = solve_pcsp(inst, method)
    print(f"{method:9s} {ans.label}  nae-valid={verify_assignment(inst, ans.assignment, 'nae')}"
          f"  {ans.trace['seconds'] * 1000:.0f} ms")
