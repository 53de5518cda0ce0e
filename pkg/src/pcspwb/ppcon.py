"""Primitive positive formulas, pp-powers, homomorphic relaxations and the
gadget reductions they induce."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, NamedTuple

from .core import (
    Instance,
    Limits,
    RelationalStructure,
    default_limits,
    index_tuple,
    is_homomorphism,
    tuple_index,
)
from .errors import ArityMismatch, ParseError, ResourceLimitExceeded, SignatureMismatch
from .hom_solver import find_structure_homomorphism, iter_homomorphisms


class RelAtom(NamedTuple):
    rel: str
    args: tuple


class EqAtom(NamedTuple):
    left: Hashable
    right: Hashable


@dataclass(frozen=True)
class PpFormula:
    free: tuple
    exists: tuple = ()
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "free", tuple(self.free))
        object.__setattr__(self, "exists", tuple(self.exists))
        atoms = tuple(a if isinstance(a, (RelAtom, EqAtom)) else _atom(a) for a in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not self.free:
            raise ValueError("a pp-formula needs at least one free variable")
        if set(self.free) & set(self.exists):
            raise ValueError("a variable cannot be both free and quantified")
        known = set(self.free) | set(self.exists)
        for atom in atoms:
            used = atom.args if isinstance(atom, RelAtom) else (atom.left, atom.right)
            for v in used:
                if v not in known:
                    raise ValueError(f"atom {atom} uses undeclared variable {v!r}")

    @property
    def variables(self) -> tuple:
        return self.free + self.exists

    def relation_arities(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for a in self.atoms:
            if isinstance(a, RelAtom) and out.setdefault(a.rel, len(a.args)) != len(a.args):
                raise ArityMismatch(f"relation {a.rel} used with two arities")
        return out

    def to_text(self) -> str:
        lines = ["free " + " ".join(map(str, self.free))]
        if self.exists:
            lines.append("exists " + " ".join(map(str, self.exists)))
        for a in self.atoms:
            if isinstance(a, RelAtom):
                lines.append(" ".join(["atom", a.rel, *map(str, a.args)]))
            else:
                lines.append(f"eq {a.left} {a.right}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PpFormula":
        return _parse_formula(list(_statements(text)))


def _atom(a) -> RelAtom | EqAtom:
    if a[0] == "=":
        return EqAtom(a[1], a[2])
    return RelAtom(a[0], tuple(a[1]))


def _statements(text: str, start_line: int = 1):
    """Yield ``(line_no, tokens)``; ``;`` separates statements on one line."""
    for n, line in enumerate(text.splitlines(), start_line):
        line = line.split("#", 1)[0]
        for part in line.split(";"):
            toks = part.split()
            if toks:
                yield n, toks


def _parse_formula(stmts) -> PpFormula:
    free, exists, atoms = [], [], []
    if not stmts:
        raise ParseError("empty pp-formula")
    for n, toks in stmts:
        key, rest = toks[0], toks[1:]
        if key == "free":
            free += rest
        elif key == "exists":
            exists += rest
        elif key == "atom":
            if len(rest) < 2:
                raise ParseError("atom needs a relation and at least one variable", n)
            atoms.append(RelAtom(rest[0], tuple(rest[1:])))
        elif key == "eq":
            if len(rest) != 2:
                raise ParseError("eq takes exactly two variables", n)
            atoms.append(EqAtom(*rest))
        else:
            raise ParseError(f"unknown statement {key!r}", n)
    try:
        return PpFormula(free, exists, atoms)
    except ValueError as exc:
        raise ParseError(str(exc), stmts[0][0]) from None


class _UnionFind:
    def __init__(self, items: Iterable[Hashable]):
        self.parent = {x: x for x in items}
        self.order = {x: i for i, x in enumerate(self.parent)}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        # the earlier-created element stays representative
        if self.order[rb] < self.order[ra]:
            ra, rb = rb, ra
        self.parent[rb] = ra


def _check_symbols(phi: PpFormula, A: RelationalStructure):
    for rel, k in phi.relation_arities().items():
        if A.signature.get(rel) != k:
            raise SignatureMismatch(f"relation {rel}/{k} not in the structure")


def evaluate_pp(phi: PpFormula, A: RelationalStructure, limits: Limits | None = None) -> frozenset:
    """Relation on ``A`` defined by ``phi`` (tuples indexed by its free variables)."""
    _check_symbols(phi, A)
    limits = limits or default_limits()
    uf = _UnionFind(phi.variables)
    for a in phi.atoms:
        if isinstance(a, EqAtom):
            uf.union(a.left, a.right)
    reps = list(dict.fromkeys(uf.find(v) for v in phi.variables))
    cons = [(a.rel, tuple(uf.find(v) for v in a.args)) for a in phi.atoms if isinstance(a, RelAtom)]
    inst = Instance(reps, cons, {r: A.arity(r) for r, _ in cons})
    free_reps = [uf.find(v) for v in phi.free]
    out = set()
    for h in iter_homomorphisms(inst, A):
        out.add(tuple(h[v] for v in free_reps))
        if len(out) > limits.max_relation:
            raise ResourceLimitExceeded("pp-defined relation exceeds max_relation")
    return frozenset(out)


def evaluate_pp_naive(phi: PpFormula, A: RelationalStructure) -> frozenset:
    """Brute force over all assignments of all variables; a test oracle."""
    _check_symbols(phi, A)
    out = set()
    vs = phi.variables
    for vals in itertools.product(A.domain, repeat=len(vs)):
        env = dict(zip(vs, vals))
        ok = True
        for a in phi.atoms:
            if isinstance(a, EqAtom):
                ok = env[a.left] == env[a.right]
            else:
                ok = tuple(env[v] for v in a.args) in A.relation(a.rel)
            if not ok:
                break
        if ok:
            out.add(tuple(env[v] for v in phi.free))
    return frozenset(out)


@dataclass(frozen=True)
class PpPowerSpec:
    """n-th pp-power: each output relation is a formula with ``k * n`` free
    variables; free variables ``k*n .. k*n + n - 1`` form the k-th n-tuple."""

    n: int
    formulas: Mapping[str, PpFormula] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("pp-power exponent must be positive")
        object.__setattr__(self, "formulas", dict(self.formulas))
        for name, phi in self.formulas.items():
            if len(phi.free) % self.n:
                raise ArityMismatch(
                    f"formula for {name} has {len(phi.free)} free variables, not a multiple of {self.n}")

    @property
    def signature(self) -> dict[str, int]:
        return {name: len(phi.free) // self.n for name, phi in self.formulas.items()}

    def base_signature(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for phi in self.formulas.values():
            for r, k in phi.relation_arities().items():
                if out.setdefault(r, k) != k:
                    raise ArityMismatch(f"relation {r} used with two arities")
        return out

    def to_text(self) -> str:
        parts = [f"power {self.n}"]
        for name, phi in self.formulas.items():
            parts.append(f"define {name}")
            parts.append(phi.to_text().rstrip("\n"))
            parts.append("end")
        return "\n".join(parts) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PpPowerSpec":
        stmts = list(_statements(text))
        if not stmts or stmts[0][1][0] != "power" or len(stmts[0][1]) != 2:
            raise ParseError("expected 'power <n>' header", stmts[0][0] if stmts else None)
        try:
            n = int(stmts[0][1][1])
        except ValueError:
            raise ParseError("exponent must be an integer", stmts[0][0]) from None
        formulas = {}
        current, body = None, []
        for ln, toks in stmts[1:]:
            if toks[0] == "define":
                if current is not None or len(toks) != 2:
                    raise ParseError("malformed or nested 'define'", ln)
                current, body = toks[1], []
            elif toks[0] == "end":
                if current is None:
                    raise ParseError("'end' without 'define'", ln)
                formulas[current] = _parse_formula(body)
                current = None
            elif current is None:
                raise ParseError(f"statement {toks[0]!r} outside a 'define' block", ln)
            else:
                body.append((ln, toks))
        if current is not None:
            raise ParseError(f"definition of {current} is not closed with 'end'")
        try:
            return cls(n, formulas)
        except ValueError as exc:
            raise ParseError(str(exc)) from None


def _regroup(rel: Iterable[tuple], n: int, d: int) -> set:
    return {tuple(tuple_index(t[i:i + n], d) for i in range(0, len(t), n)) for t in rel}


def pp_power(spec: PpPowerSpec, A: RelationalStructure, B: RelationalStructure | None = None,
             limits: Limits | None = None) -> tuple[RelationalStructure, RelationalStructure]:
    """``(A', B')``: the same formulas evaluated in ``A`` and in ``B``.

    Elements of ``A'`` are n-tuples encoded as in :func:`pcspwb.core.power_structure`.
    """
    B = A if B is None else B
    if not A.is_similar(B):
        raise SignatureMismatch(f"{A!r} and {B!r} are not similar")
    limits = limits or default_limits()
    out = []
    for S in (A, B):
        if S.domain_size ** spec.n > limits.max_cells:
            raise ResourceLimitExceeded(f"{S.domain_size}^{spec.n} exceeds max_cells")
        rels = {name: _regroup(evaluate_pp(phi, S, limits), spec.n, S.domain_size)
                for name, phi in spec.formulas.items()}
        out.append(RelationalStructure(S.domain_size ** spec.n, rels, spec.signature))
    return out[0], out[1]


@dataclass(frozen=True)
class RelaxationWitness:
    f: dict   # A' -> A
    g: dict   # B -> B'


def check_relaxation(A2: RelationalStructure, B2: RelationalStructure,
                     A: RelationalStructure, B: RelationalStructure) -> RelaxationWitness | None:
    """Is ``(A2, B2)`` a homomorphic relaxation of ``(A, B)``?"""
    if not (A2.is_similar(B2) and A.is_similar(B) and A2.is_similar(A)):
        raise SignatureMismatch("templates are not similar")
    f = find_structure_homomorphism(A2, A)
    if f is None:
        return None
    g = find_structure_homomorphism(B, B2)
    if g is None:
        return None
    assert is_homomorphism(f, A2, A) and is_homomorphism(g, B, B2)
    return RelaxationWitness(f, g)


def _fresh(name: str, taken: set) -> str:
    cand = name
    while cand in taken:
        cand += "'"
    taken.add(cand)
    return cand


def gadget_reduce(X: Instance, spec: PpPowerSpec, with_map: bool = False):
    """Replace every variable by ``n`` copies and every constraint by its formula.

    Existential variables get fresh copies per constraint; equality atoms
    are removed by identifying variables. With ``with_map`` the result is
    ``(instance, copies)`` where ``copies[v]`` lists the output variables
    standing for the coordinates of ``v``.
    """
    sig = spec.signature
    for rel, k in X.signature.items():
        if sig.get(rel) != k:
            raise ArityMismatch(f"instance relation {rel}/{k} has no matching formula")
    n = spec.n
    taken = set()
    copies = {}
    for v in X.variables:
        if n == 1:
            copies[v] = (_fresh(str(v), taken),)
        else:
            copies[v] = tuple(_fresh(f"{v}.{i}", taken) for i in range(n))
    order = [c for v in X.variables for c in copies[v]]
    raw_cons = []
    eqs = []
    for ci, (rel, scope) in enumerate(X.constraints, 1):
        phi = spec.formulas[rel]
        env = {}
        for j, fv in enumerate(phi.free):
            env[fv] = copies[scope[j // n]][j % n]
        for z in phi.exists:
            env[z] = _fresh(f"{z}_{ci}", taken)
            order.append(env[z])
        for a in phi.atoms:
            if isinstance(a, RelAtom):
                raw_cons.append((a.rel, tuple(env[v] for v in a.args)))
            else:
                eqs.append((env[a.left], env[a.right]))
    uf = _UnionFind(order)
    for a, b in eqs:
        uf.union(a, b)
    variables = list(dict.fromkeys(uf.find(v) for v in order))
    cons = [(r, tuple(uf.find(v) for v in scope)) for r, scope in raw_cons]
    out = Instance(variables, cons, spec.base_signature())
    if with_map:
        return out, {v: tuple(uf.find(c) for c in cs) for v, cs in copies.items()}
    return out


def decode_power_assignment(h: Mapping, copies: Mapping, d: int) -> dict:
    """Turn a solution of the gadget instance into an assignment into the pp-power."""
    return {v: tuple_index((h[c] for c in cs), d) for v, cs in copies.items()}


@dataclass
class ConstructionChain:
    """A sequence of pp-power and relaxation steps starting at ``(A, B)``.

    Steps are ``("power", PpPowerSpec)`` or ``("relax", (A2, B2))``.
    """

    A: RelationalStructure
    B: RelationalStructure
    steps: list = field(default_factory=list)

    def templates(self) -> list[tuple[RelationalStructure, RelationalStructure]]:
        pairs = [(self.A, self.B)]
        for kind, arg in self.steps:
            A, B = pairs[-1]
            if kind == "power":
                pairs.append(pp_power(arg, A, B))
            elif kind == "relax":
                A2, B2 = arg
                if check_relaxation(A2, B2, A, B) is None:
                    raise ValueError("relaxation step has no witness")
                pairs.append((A2, B2))
            else:
                raise ValueError(f"unknown step kind {kind!r}")
        return pairs

    def reduce(self, X: Instance) -> Instance:
        """Map an instance of the last template to one of the first."""
        for kind, arg in reversed(self.steps):
            if kind == "power":
                X = gadget_reduce(X, arg)
        return X


def identity_power_spec(A: RelationalStructure) -> PpPowerSpec:
    """n = 1 spec re-defining every relation of ``A`` by itself."""
    formulas = {}
    for r, k in A.signature.items():
        vs = tuple(f"v{i}" for i in range(k))
        formulas[r] = PpFormula(vs, (), (RelAtom(r, vs),))
    return PpPowerSpec(1, formulas)


__all__ = [
    "RelAtom", "EqAtom", "PpFormula", "PpPowerSpec", "RelaxationWitness", "ConstructionChain",
    "evaluate_pp", "evaluate_pp_naive", "pp_power", "check_relaxation", "gadget_reduce",
    "decode_power_assignment", "identity_power_spec", "index_tuple",
]
