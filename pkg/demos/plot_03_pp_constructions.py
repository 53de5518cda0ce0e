"""
pp-powers and gadget reductions
===============================

A pp-power redefines a template over pairs (or n-tuples) of elements
using existentially quantified conjunctions. Every such definition comes
with a reduction: each constraint of the new template is replaced by the
formula's atoms, with fresh variables for the quantified ones.
"""

from pcspwb.core import Instance, builtin_template
from pcspwb.hom_solver import find_homomorphism
from pcspwb.ppcon import (PpFormula, PpPowerSpec, check_relaxation, decode_power_assignment,
                          evaluate_pp, gadget_reduce, pp_power)

one_in_three = builtin_template("one-in-three")
nae = builtin_template("nae")

# Projecting away the last coordinate of 1-in-3.
phi = PpFormula.from_text("free x y ; exists z ; atom R x y z")
print("exists z R(x,y,z):", sorted(evaluate_pp(phi, one_in_three)))

# A second power over pairs. P relates (a0, a1) to (b0, b1).
spec = PpPowerSpec.from_text("""
power 2
define P
  free a0 a1 b0 b1
  atom R a0 b0 b1
  atom R a1 b1 a0
end
""")
A2, B2 = pp_power(spec, one_in_three, nae)
print("P in the 1-in-3 power:", len(A2.relation("P")), "pairs; in the NAE power:",
      len(B2.relation("P")))

# Reduce an instance of the power back to the base template.
X = Instance(["u", "v", "w"], [("P", ("u", "v")), ("P", ("v", "w"))], {"P": 2})
G, copies = gadget_reduce(X, spec, with_map=True)
print("gadget variables:", G.variables)
print("gadget constraints:", G.constraints)
h = find_homomorphism(G, one_in_three)
if h is not None:
    print("solution of X in the power:", decode_power_assignment(h, copies, 2))
else:
    print("gadget has no 1-in-3 solution, so X has none in the power")

# Homomorphic relaxation: (1-in-3, NAE) sits between (NAE, NAE) via the
# inclusion and the identity.
w = check_relaxation(one_in_three, nae, nae, nae)
print("relaxation witness:", w)
print("(NAE, NAE) relaxing (1-in-3, 1-in-3):",
      check_relaxation(nae, nae, one_in_three, one_in_three))
