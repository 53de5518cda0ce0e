"""
The matrix argument behind the hardness proof
=============================================

A cyclic operation s of prime arity p gives an operation t of arity p^2:
lay the arguments out as a p x p matrix, apply s to every column, then s
to the results. This script walks through the objects the argument uses
(areas, covers, tame matrices) and finally runs the two-rectangle
construction at p = 127 against procedural stand-ins for s.
"""

from pcspwb.proof_lab import (BlackBoxOperation, area, area_doubling, eval_t, format_matrix,
                              is_cover, is_tame, line_cover, refute_cyclic, rho, shift, tau,
                              untame_lines)

# t is invariant under cyclic shifts of the flattened argument tuple.
s = BlackBoxOperation.threshold(5)
X = tau(12, 5)
print("t(X) =", eval_t(s, X), "after a flat shift:", eval_t(s, shift(X, "flat-cyclic", 7)))

# Areas of prime-sized matrices avoid 1/3 because p^2 has no factor 3.
print("area tau(8) =", area(tau(8, 5)), " area tau(9) =", area(tau(9, 5)))

# Three lines that together cover every cell exactly once.
print("line cover is a cover:", is_cover(*line_cover(8, 8, 5)))
print(format_matrix(rho(3, 3, 2, 2, 2)), end="")

# One of the cover constructions: X, then two rotated almost rectangles.
parts = area_doubling(2, 1, 2, 5)
print("area-doubling cover:", is_cover(*parts["cover"]))

# Tameness depends on s. Parity is not tame on the single-one matrix.
par3 = BlackBoxOperation.parity(3)
print("parity, tau(1) tame?", bool(is_tame(tau(1, 3), par3)))
print("untame lines for parity at p=5:", untame_lines(BlackBoxOperation.parity(5)))

# The final construction at p = 127 with |C| = 2.
for op in (BlackBoxOperation.parity(127), BlackBoxOperation.threshold(127)):
    rep = refute_cyclic(op, 2)
    print(f"{op.name}: l1={rep.l1} l2={rep.l2} k={rep.k} "
          f"areas {float(rep.area_X1):.4f} < 1/3 < {float(rep.area_X2):.4f} "
          f"t equal={rep.t_X1 == rep.t_X2} all checks={all(rep.checks.values())}")
    print("   ", rep.verdict)
