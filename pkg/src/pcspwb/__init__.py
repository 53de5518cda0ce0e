"""Constraint satisfaction workbench.

Finite relational structures and homomorphism search, exact integer and
rational linear algebra, the affine algorithm for PCSP(1-in-3, NAE),
polymorphism search, pp-constructions, and the matrix toolkit for the
star-composed operation of a cyclic operation.
"""

from .core import (
    Instance,
    Limits,
    RelationalStructure,
    Signature,
    builtin_template,
    is_homomorphism,
    power_structure,
    validate_structure,
)
from .hom_solver import SolverConfig, enumerate_homomorphisms, find_homomorphism
from .linear import (
    IntegerLinearSystem,
    hermite_normal_form,
    solve_integer_system,
    solve_rational_avoiding,
)
from .pcsp13 import TripleInstance, gen_planted, solve_pcsp, verify_assignment
from .polymorphisms import (
    OperationTable,
    find_polymorphism,
    is_cyclic,
    is_pcsp_polymorphism,
    is_polymorphism,
    pseudo_siggers_search,
)

__version__ = "0.1.0"

__all__ = [
    "Instance", "Limits", "RelationalStructure", "Signature", "builtin_template",
    "is_homomorphism", "power_structure", "validate_structure",
    "SolverConfig", "enumerate_homomorphisms", "find_homomorphism",
    "IntegerLinearSystem", "hermite_normal_form", "solve_integer_system",
    "solve_rational_avoiding",
    "TripleInstance", "gen_planted", "solve_pcsp", "verify_assignment",
    "OperationTable", "find_polymorphism", "is_cyclic", "is_pcsp_polymorphism",
    "is_polymorphism", "pseudo_siggers_search",
]
