"""Polymorphisms of CSP and PCSP templates.

Searches are compiled into an indicator instance (one variable per
argument tuple, or per rotation orbit for cyclic operations) and handed
to :mod:`pcspwb.hom_solver`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Sequence

from .core import (
    Instance,
    Limits,
    RelationalStructure,
    default_limits,
    index_tuple,
    is_homomorphism,
    tuple_index,
)
from .errors import (
    ArityMismatch,
    DomainMismatch,
    NotAHomomorphism,
    ParseError,
    ResourceLimitExceeded,
    SignatureMismatch,
)
from .hom_solver import SolverConfig, find_homomorphism, iter_homomorphisms


class OperationTable:
    """An n-ary operation ``{0..d-1}^n -> {0..e-1}`` stored as a value table.

    ``values[i]`` is the image of the i-th argument tuple in lexicographic
    order. ``codomain_size`` defaults to ``domain_size``.
    """

    __slots__ = ("arity", "domain_size", "codomain_size", "values")

    def __init__(self, arity: int, domain_size: int, values: Sequence[int],
                 codomain_size: int | None = None):
        if arity < 1:
            raise ArityMismatch("operations need arity >= 1")
        codomain_size = domain_size if codomain_size is None else codomain_size
        values = tuple(int(v) for v in values)
        if len(values) != domain_size ** arity:
            raise ValueError(f"table has {len(values)} entries, expected {domain_size}^{arity}")
        if any(not 0 <= v < codomain_size for v in values):
            raise ValueError(f"table values must lie in 0..{codomain_size - 1}")
        self.arity = arity
        self.domain_size = domain_size
        self.codomain_size = codomain_size
        self.values = values

    @classmethod
    def from_function(cls, arity: int, domain_size: int, fn: Callable[..., int],
                      codomain_size: int | None = None) -> "OperationTable":
        vals = [fn(*args) for args in itertools.product(range(domain_size), repeat=arity)]
        return cls(arity, domain_size, vals, codomain_size)

    @classmethod
    def projection(cls, arity: int, domain_size: int, coordinate: int = 0) -> "OperationTable":
        return cls.from_function(arity, domain_size, lambda *a: a[coordinate])

    def __call__(self, *args: int) -> int:
        return self.values[tuple_index(args, self.domain_size)]

    def arguments(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.domain_size), repeat=self.arity)

    def __eq__(self, other):
        if not isinstance(other, OperationTable):
            return NotImplemented
        return (self.arity, self.domain_size, self.codomain_size, self.values) == \
            (other.arity, other.domain_size, other.codomain_size, other.values)

    def __hash__(self):
        return hash((self.arity, self.domain_size, self.values))

    def __repr__(self):
        return f"OperationTable(arity={self.arity}, d={self.domain_size}, values={self.values})"

    def to_text(self) -> str:
        header = f"op {self.arity} {self.domain_size}"
        if self.codomain_size != self.domain_size:
            header += f" {self.codomain_size}"
        return header + "\n" + " ".join(map(str, self.values)) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OperationTable":
        lines = [(n, ln.split("#", 1)[0].strip()) for n, ln in enumerate(text.splitlines(), 1)]
        lines = [(n, ln) for n, ln in lines if ln]
        if not lines:
            raise ParseError("empty operation table")
        n0, head = lines[0]
        parts = head.split()
        if parts[0] != "op" or len(parts) not in (3, 4):
            raise ParseError("expected header 'op <arity> <domain-size>'", n0, 1)
        try:
            nums = [int(x) for x in parts[1:]]
            vals = [int(x) for _, ln in lines[1:] for x in ln.split()]
        except ValueError as exc:
            raise ParseError(f"non-integer token: {exc}", n0) from None
        try:
            return cls(nums[0], nums[1], vals, nums[2] if len(nums) == 3 else None)
        except ValueError as exc:
            raise ParseError(str(exc), n0) from None


# -- checking ---------------------------------------------------------------

def _preserves(s: OperationTable, A: RelationalStructure, B: RelationalStructure) -> bool:
    d, n = A.domain_size, s.arity
    vals = s.values
    for r, k in A.signature.items():
        target = B.relation(r)
        if len(target) == B.domain_size ** k:
            continue
        rows = A.tuples(r)
        for choice in itertools.product(rows, repeat=n):
            out = tuple(vals[tuple_index((row[j] for row in choice), d)] for j in range(k))
            if out not in target:
                return False
    return True


def is_polymorphism(s: OperationTable, C: RelationalStructure) -> bool:
    """True iff ``s`` preserves every relation of ``C``."""
    if s.domain_size != C.domain_size or s.codomain_size != C.domain_size:
        raise DomainMismatch(f"operation on {s.domain_size} elements, structure has {C.domain_size}")
    return _preserves(s, C, C)


def is_pcsp_polymorphism(s: OperationTable, A: RelationalStructure, B: RelationalStructure) -> bool:
    """True iff ``s`` is a homomorphism ``A^n -> B``."""
    if not A.is_similar(B):
        raise SignatureMismatch(f"{A!r} and {B!r} are not similar")
    if s.domain_size != A.domain_size or s.codomain_size != B.domain_size:
        raise DomainMismatch(
            f"operation maps {s.domain_size} -> {s.codomain_size} elements, "
            f"template is {A.domain_size} -> {B.domain_size}")
    return _preserves(s, A, B)


def rotate(args: tuple, k: int = 1) -> tuple:
    return args[k:] + args[:k]


def canonical_rotation(args: tuple) -> tuple:
    """Lexicographically least rotation."""
    return min(rotate(args, k) for k in range(len(args)))


def is_cyclic(s: OperationTable) -> bool:
    if s.arity < 2:
        raise ArityMismatch("cyclicity needs arity >= 2")
    return all(s(*args) == s(*rotate(args)) for args in s.arguments())


def check_block_symmetric_on_pairs(s: OperationTable) -> bool:
    """On every two-element subset ``{a, b}`` the value depends only on how
    many arguments equal ``a``."""
    for a, b in itertools.combinations(range(s.domain_size), 2):
        seen: dict[int, int] = {}
        for args in itertools.product((a, b), repeat=s.arity):
            count = args.count(a)
            v = s(*args)
            if seen.setdefault(count, v) != v:
                return False
    return True


# -- search -----------------------------------------------------------------

def _variable_of(sym: str) -> Callable[[tuple], tuple]:
    if sym == "none":
        return lambda t: t
    if sym == "cyclic":
        return canonical_rotation
    raise ValueError(f"unknown symmetry {sym!r}")


def indicator_instance(A: RelationalStructure, n: int, sym: str = "none",
                       limits: Limits | None = None, dedupe: bool = False) -> Instance:
    """Instance whose homomorphisms to ``B`` are the n-ary polymorphisms ``A -> B``.

    Variables are argument tuples (for ``sym="cyclic"``, their least
    rotations). One constraint is emitted per n-tuple of relation tuples
    unless ``dedupe`` is set.
    """
    limits = limits or default_limits()
    d = A.domain_size
    if d ** n > limits.max_cells:
        raise ResourceLimitExceeded(f"{d}^{n} argument tuples exceed max_cells={limits.max_cells}")
    for r in A.signature:
        if len(A.relation(r)) ** n > limits.max_relation:
            raise ResourceLimitExceeded(
                f"{len(A.relation(r))}^{n} constraints for {r} exceed max_relation")
    var = _variable_of(sym)
    variables = dict.fromkeys(var(t) for t in itertools.product(range(d), repeat=n))
    constraints = []
    for r, k in A.signature.items():
        rows = A.tuples(r)
        for choice in itertools.product(rows, repeat=n):
            scope = tuple(var(tuple(row[j] for row in choice)) for j in range(k))
            constraints.append((r, scope))
    if dedupe:
        constraints = list(dict.fromkeys(constraints))
    return Instance(variables, constraints, A.signature)


def _table_from(h: Mapping, A: RelationalStructure, B: RelationalStructure, n: int, sym: str):
    var = _variable_of(sym)
    vals = [h[var(t)] for t in itertools.product(range(A.domain_size), repeat=n)]
    return OperationTable(n, A.domain_size, vals, B.domain_size)


def find_polymorphism(A: RelationalStructure, B: RelationalStructure | None, n: int,
                      sym: str = "none", limits: Limits | None = None,
                      cfg: SolverConfig | None = None) -> OperationTable | None:
    """Some n-ary polymorphism of ``(A, B)`` (cyclic if ``sym='cyclic'``), or
    ``None`` when the exhaustive search finds none. ``B=None`` means ``B=A``."""
    B = A if B is None else B
    if not A.is_similar(B):
        raise SignatureMismatch(f"{A!r} and {B!r} are not similar")
    inst = indicator_instance(A, n, sym, limits, dedupe=True)
    h = find_homomorphism(inst, B, cfg)
    return None if h is None else _table_from(h, A, B, n, sym)


def enumerate_polymorphisms(A: RelationalStructure, B: RelationalStructure | None, n: int,
                            sym: str = "none", limits: Limits | None = None,
                            cfg: SolverConfig | None = None) -> list[OperationTable]:
    B = A if B is None else B
    if not A.is_similar(B):
        raise SignatureMismatch(f"{A!r} and {B!r} are not similar")
    inst = indicator_instance(A, n, sym, limits, dedupe=True)
    return [_table_from(h, A, B, n, sym) for h in iter_homomorphisms(inst, B, cfg)]


def _primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, int(p ** 0.5) + 1))]


def cyclic_survey(A: RelationalStructure, B: RelationalStructure | None = None,
                  max_prime: int = 5, limits: Limits | None = None) -> dict[int, OperationTable | None]:
    """Cyclic polymorphism search at every prime arity up to ``max_prime``."""
    return {p: find_polymorphism(A, B, p, "cyclic", limits) for p in _primes_up_to(max_prime)}


def compose_sandwich(f: Mapping[int, int] | Sequence[int], s: OperationTable,
                     g: Mapping[int, int] | Sequence[int], A: RelationalStructure,
                     C: RelationalStructure, B: RelationalStructure) -> OperationTable:
    """``g(s(f(x1), ..., f(xn)))``, a polymorphism of ``(A, B)`` whenever ``s``
    is a polymorphism of ``C`` and ``f: A -> C``, ``g: C -> B``."""
    f = f if isinstance(f, Mapping) else dict(enumerate(f))
    g = g if isinstance(g, Mapping) else dict(enumerate(g))
    if not is_homomorphism(f, A, C):
        raise NotAHomomorphism("inner map is not a homomorphism A -> C")
    if not is_homomorphism(g, C, B):
        raise NotAHomomorphism("outer map is not a homomorphism C -> B")
    if s.domain_size != C.domain_size or s.codomain_size != C.domain_size:
        raise DomainMismatch("operation does not act on the middle structure")
    return OperationTable.from_function(
        s.arity, A.domain_size, lambda *a: g[s(*(f[x] for x in a))], B.domain_size)


@dataclass(frozen=True)
class PseudoSiggersWitness:
    s: OperationTable
    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def holds(self, C: RelationalStructure) -> bool:
        """Re-verify all three polymorphism conditions and the identity."""
        al = OperationTable(1, C.domain_size, self.alpha)
        be = OperationTable(1, C.domain_size, self.beta)
        if not (is_polymorphism(self.s, C) and is_polymorphism(al, C) and is_polymorphism(be, C)):
            return False
        return all(self.alpha[self.s(x, y, x, z, y, z)] == self.beta[self.s(y, x, z, x, z, y)]
                   for x, y, z in itertools.product(C.domain, repeat=3))


_LINK = "__alpha_beta_link"


def pseudo_siggers_search(C: RelationalStructure, limits: Limits | None = None,
                          cfg: SolverConfig | None = None) -> PseudoSiggersWitness | None:
    """Search for a 6-ary ``s`` and unary polymorphisms ``alpha``, ``beta`` with
    ``alpha s(x,y,x,z,y,z) = beta s(y,x,z,x,z,y)``.

    Every pair of unary polymorphisms is tried; for each pair the identity
    becomes a binary linking constraint added to the 6-ary indicator.
    """
    unary = [tuple(u.values) for u in enumerate_polymorphisms(C, C, 1, limits=limits)]
    base = indicator_instance(C, 6, "none", limits, dedupe=True)
    links = [((x, y, x, z, y, z), (y, x, z, x, z, y))
             for x, y, z in itertools.product(C.domain, repeat=3)]
    sig = dict(C.signature)
    sig[_LINK] = 2
    inst = Instance(base.variables, list(base.constraints) + [(_LINK, lk) for lk in links], sig)
    for alpha in unary:
        for beta in unary:
            rels = dict(C.relations)
            rels[_LINK] = {(u, v) for u in C.domain for v in C.domain if alpha[u] == beta[v]}
            augmented = RelationalStructure(C.domain_size, rels, sig)
            h = find_homomorphism(inst, augmented, cfg)
            if h is not None:
                return PseudoSiggersWitness(_table_from(h, C, C, 6, "none"), alpha, beta)
    return None


def threshold_table(n: int, fraction=None) -> OperationTable:
    """Boolean ``x1 + ... + xn > n/3`` (or ``> fraction * n``)."""
    from fractions import Fraction

    cut = Fraction(1, 3) if fraction is None else Fraction(fraction)
    return OperationTable.from_function(n, 2, lambda *a: int(sum(a) > cut * n))


def all_tables(n: int, d: int, e: int | None = None) -> Iterator[OperationTable]:
    """Every operation ``{0..d-1}^n -> {0..e-1}``; exhaustive oracle for tests."""
    e = d if e is None else e
    for vals in itertools.product(range(e), repeat=d ** n):
        yield OperationTable(n, d, vals, e)


__all__ = [
    "OperationTable", "is_polymorphism", "is_pcsp_polymorphism", "is_cyclic",
    "check_block_symmetric_on_pairs", "indicator_instance", "find_polymorphism",
    "enumerate_polymorphisms", "cyclic_survey", "compose_sandwich",
    "PseudoSiggersWitness", "pseudo_siggers_search", "threshold_table", "all_tables",
    "canonical_rotation", "index_tuple",
]
