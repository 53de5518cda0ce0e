"""Relational structures, instances and homomorphisms.

Domain elements are the integers ``0..d-1``. Relations are kept as frozen
sets of tuples; a sorted view is available for deterministic iteration.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, NamedTuple

from .errors import (
    ArityMismatch,
    ElementOutOfDomain,
    ResourceLimitExceeded,
    SignatureMismatch,
    StructureError,
    UnknownName,
)


@dataclass(frozen=True)
class Limits:
    """Resource caps. ``max_cells`` bounds domain sizes of powers and the
    number of argument tuples of indicator instances; ``max_relation``
    bounds the size of any constructed relation."""

    max_cells: int = 10**7
    max_relation: int = 10**7
    max_nodes: int = 10**7

    @classmethod
    def from_env(cls, text: str | None = None) -> "Limits":
        """Parse ``PCSPWB_LIMITS`` (``key=value`` pairs separated by commas)."""
        if text is None:
            text = os.environ.get("PCSPWB_LIMITS", "")
        values = {}
        for part in text.replace(";", ",").split(","):
            part = part.strip()
            if not part:
                continue
            key, _, value = part.partition("=")
            key = key.strip().replace("-", "_")
            if key not in cls.__dataclass_fields__:
                raise ValueError(f"unknown limit {key!r}")
            values[key] = int(value)
        return cls(**values)


def default_limits() -> Limits:
    return Limits.from_env()


class Signature(dict):
    """Mapping relation name -> arity."""

    def __init__(self, arities: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        super().__init__(arities)
        for name, arity in self.items():
            if not isinstance(arity, int) or arity < 1:
                raise ArityMismatch(f"relation {name!r} has invalid arity {arity!r}")


class Violation(NamedTuple):
    kind: str  # "arity-mismatch" | "element-out-of-domain"
    relation: str
    tuple: tuple
    message: str


def _check_relations(domain_size, arities, relations) -> list[Violation]:
    report = []
    for name in sorted(relations):
        arity = arities[name]
        for tup in sorted(relations[name], key=repr):
            if len(tup) != arity:
                report.append(Violation(
                    "arity-mismatch", name, tup,
                    f"{name}: tuple {tup} has length {len(tup)}, expected {arity}"))
                continue
            for pos, a in enumerate(tup):
                if not (isinstance(a, int) and 0 <= a < domain_size):
                    report.append(Violation(
                        "element-out-of-domain", name, tup,
                        f"{name}: tuple {tup} position {pos} holds {a!r}, "
                        f"domain is 0..{domain_size - 1}"))
    return report


class RelationalStructure:
    """A finite structure ``({0..d-1}; R_1, ..., R_n)``.

    Immutable after construction. ``arities`` is needed only for relations
    that may be empty; otherwise it is read off the tuples.
    """

    __slots__ = ("name", "domain_size", "signature", "_relations", "_sorted")

    def __init__(self, domain_size: int, relations: Mapping[str, Iterable[tuple]],
                 arities: Mapping[str, int] | None = None, name: str | None = None,
                 validate: bool = True):
        if domain_size < 1:
            raise StructureError("domain must be nonempty", [])
        rels = {r: frozenset(tuple(t) for t in ts) for r, ts in relations.items()}
        arities = dict(arities or {})
        for r, ts in rels.items():
            if r not in arities:
                if not ts:
                    raise ArityMismatch(f"empty relation {r!r} needs an explicit arity")
                arities[r] = len(next(iter(ts)))
        if set(arities) != set(rels):
            raise SignatureMismatch("arities and relations name different symbols")
        self.name = name
        self.domain_size = domain_size
        self.signature = Signature(sorted(arities.items()))
        self._relations = rels
        self._sorted: dict[str, tuple[tuple, ...]] = {}
        if validate:
            report = _check_relations(domain_size, self.signature, rels)
            if report:
                cls = ArityMismatch if report[0].kind == "arity-mismatch" else ElementOutOfDomain
                raise cls(report[0].message, report)

    @property
    def domain(self) -> range:
        return range(self.domain_size)

    def relation(self, name: str) -> frozenset:
        return self._relations[name]

    def tuples(self, name: str) -> tuple[tuple, ...]:
        """Sorted tuples of relation ``name``."""
        if name not in self._sorted:
            self._sorted[name] = tuple(sorted(self._relations[name]))
        return self._sorted[name]

    @property
    def relations(self) -> dict[str, frozenset]:
        return dict(self._relations)

    def arity(self, name: str) -> int:
        return self.signature[name]

    def is_similar(self, other: "RelationalStructure") -> bool:
        return self.signature == other.signature

    def __eq__(self, other):
        if not isinstance(other, RelationalStructure):
            return NotImplemented
        return (self.domain_size == other.domain_size
                and self.signature == other.signature
                and self._relations == other._relations)

    def __hash__(self):
        return hash((self.domain_size, tuple(sorted(self.signature.items()))))

    def __repr__(self):
        rels = ", ".join(f"{r}/{a}:{len(self._relations[r])}" for r, a in self.signature.items())
        label = f"{self.name} " if self.name else ""
        return f"<RelationalStructure {label}d={self.domain_size} {rels}>"


def validate_structure(domain_size: int, relations: Mapping[str, Iterable[tuple]],
                       arities: Mapping[str, int]) -> list[Violation]:
    """Check raw structure data; an empty list means the data is well formed."""
    rels = {r: [tuple(t) for t in ts] for r, ts in relations.items()}
    return _check_relations(domain_size, arities, rels)


@dataclass(frozen=True)
class Instance:
    """A CSP instance: variables plus constraints ``(symbol, variable tuple)``."""

    variables: tuple[Hashable, ...]
    constraints: tuple[tuple[str, tuple], ...]
    signature: Signature = field(default_factory=Signature)

    def __init__(self, variables: Iterable[Hashable],
                 constraints: Iterable[tuple[str, Iterable[Hashable]]],
                 signature: Mapping[str, int] | None = None):
        variables = tuple(dict.fromkeys(variables))
        constraints = tuple((rel, tuple(scope)) for rel, scope in constraints)
        if signature is None:
            signature = {}
            for rel, scope in constraints:
                signature.setdefault(rel, len(scope))
        signature = Signature(signature)
        known = set(variables)
        for rel, scope in constraints:
            if rel not in signature:
                raise SignatureMismatch(f"constraint uses unknown relation {rel!r}")
            if len(scope) != signature[rel]:
                raise ArityMismatch(
                    f"constraint {rel}{scope} has length {len(scope)}, arity is {signature[rel]}")
            missing = [v for v in scope if v not in known]
            if missing:
                raise UnknownName(f"constraint {rel}{scope} references undeclared {missing[0]!r}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "signature", signature)

    def __len__(self):
        return len(self.variables)


def structure_as_instance(A: RelationalStructure) -> Instance:
    """View a structure as an instance (variables are its domain elements)."""
    cons = [(r, t) for r in A.signature for t in A.tuples(r)]
    return Instance(A.domain, cons, A.signature)


def instance_as_structure(X: Instance) -> tuple[RelationalStructure, dict]:
    """Canonical structure of ``X`` together with the variable -> element index."""
    index = {v: i for i, v in enumerate(X.variables)}
    rels = {r: set() for r in X.signature}
    for r, scope in X.constraints:
        rels[r].add(tuple(index[v] for v in scope))
    return RelationalStructure(max(1, len(index)), rels, X.signature), index


def satisfies(X: Instance, B: RelationalStructure, h: Mapping) -> bool:
    """Independent constraint-by-constraint check of an assignment."""
    if any(v not in h for v in X.variables):
        return False
    for r, scope in X.constraints:
        if tuple(h[v] for v in scope) not in B.relation(r):
            return False
    return True


def is_homomorphism(h: Mapping[int, int] | Iterable[int], A: RelationalStructure,
                    B: RelationalStructure) -> bool:
    """True iff ``h`` maps every relation tuple of ``A`` into ``B``."""
    if not A.is_similar(B):
        raise SignatureMismatch(f"{A!r} and {B!r} are not similar")
    if not isinstance(h, Mapping):
        h = dict(enumerate(h))
    if any(a not in h for a in A.domain):
        raise ValueError("homomorphism candidate is not total on the source domain")
    if any(not (0 <= h[a] < B.domain_size) for a in A.domain):
        return False
    for r in A.signature:
        target = B.relation(r)
        for tup in A.relation(r):
            if tuple(h[a] for a in tup) not in target:
                return False
    return True


def tuple_index(tup: Iterable[int], d: int) -> int:
    """Lexicographic index of a tuple over ``0..d-1``."""
    idx = 0
    for a in tup:
        idx = idx * d + a
    return idx


def index_tuple(idx: int, d: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        idx, out[i] = divmod(idx, d)
    return tuple(out)


def power_structure(A: RelationalStructure, n: int, limits: Limits | None = None) -> RelationalStructure:
    """n-th categorical power; element ``i`` encodes the n-tuple ``index_tuple(i, d, n)``."""
    if n < 1:
        raise ValueError("exponent must be positive")
    limits = limits or default_limits()
    d = A.domain_size
    if d ** n > limits.max_cells:
        raise ResourceLimitExceeded(f"power domain {d}^{n} exceeds max_cells={limits.max_cells}")
    rels = {}
    for r, k in A.signature.items():
        ts = A.tuples(r)
        if len(ts) ** n > limits.max_relation:
            raise ResourceLimitExceeded(
                f"power relation {r} has {len(ts)}^{n} tuples, above max_relation")
        rel = set()
        for rows in itertools.product(ts, repeat=n):
            rel.add(tuple(tuple_index((row[j] for row in rows), d) for j in range(k)))
        rels[r] = rel
    return RelationalStructure(d ** n, rels, A.signature, name=f"{A.name or 'A'}^{n}")


ONE_IN_THREE_TUPLES = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def builtin_template(name: str) -> RelationalStructure:
    """The fixed templates: ``one-in-three``, ``nae``, ``c2-plus-c3``."""
    key = name.lower().replace("_", "-")
    if key in ("one-in-three", "1-in-3", "1in3"):
        return RelationalStructure(2, {"R": ONE_IN_THREE_TUPLES}, name="one-in-three")
    if key == "nae":
        nae = [t for t in itertools.product((0, 1), repeat=3) if len(set(t)) > 1]
        return RelationalStructure(2, {"R": nae}, name="nae")
    if key == "c2-plus-c3":
        arcs = [(0, 1), (1, 0), (2, 3), (3, 4), (4, 2)]
        return RelationalStructure(5, {"E": arcs}, name="c2-plus-c3")
    if key.startswith("k") and key[1:].isdigit():
        # complete graph K_n, the disequality template
        k = int(key[1:])
        ne = [(a, b) for a in range(k) for b in range(k) if a != b]
        return RelationalStructure(k, {"E": ne}, {"E": 2}, name=key)
    raise UnknownName(f"unknown template {name!r}")


BUILTIN_NAMES = ("one-in-three", "nae", "c2-plus-c3")


def compose(h2: Mapping, h1: Mapping) -> dict:
    """``h2 ∘ h1`` as a dict."""
    return {a: h2[b] for a, b in h1.items()}


def iter_maps(d_from: int, d_to: int) -> Iterator[tuple[int, ...]]:
    """All maps ``{0..d_from-1} -> {0..d_to-1}`` as value tuples."""
    return itertools.product(range(d_to), repeat=d_from)
