"""Backtracking search for homomorphisms ``Instance -> RelationalStructure``.

Propagation is generalized arc consistency: each constraint's relation is
filtered against the current domains and every variable keeps only the
values that still have support. The fixpoint is recomputed after every
decision.
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass
from typing import Iterator, Mapping

from .core import Instance, RelationalStructure, default_limits
from .errors import LimitExceeded, SignatureMismatch


@dataclass(frozen=True)
class SolverConfig:
    variable_order: str = "mrv"      # "mrv" (ties by index) or "index"
    value_order: str = "domain"      # "domain" or "shuffle"
    node_limit: int | None = None    # None -> Limits.max_nodes
    solution_limit: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.variable_order not in ("mrv", "index"):
            raise ValueError(f"unknown variable ordering {self.variable_order!r}")
        if self.value_order not in ("domain", "shuffle"):
            raise ValueError(f"unknown value ordering {self.value_order!r}")
        for lim in (self.node_limit, self.solution_limit):
            if lim is not None and lim < 1:
                raise ValueError("limits must be positive")


class _Search:
    def __init__(self, X: Instance, A: RelationalStructure, cfg: SolverConfig,
                 domains: Mapping | None = None):
        for rel, arity in X.signature.items():
            if A.signature.get(rel) != arity:
                raise SignatureMismatch(
                    f"relation {rel}/{arity} of the instance is missing from the template")
        self.X = X
        self.cfg = cfg
        self.node_limit = cfg.node_limit or default_limits().max_nodes
        self.nodes = 0
        self.rng = random.Random(cfg.seed)
        index = {v: i for i, v in enumerate(X.variables)}
        n = len(index)
        full = set(range(A.domain_size))
        self.init = [set(full) for _ in range(n)]
        if domains:
            for v, vals in domains.items():
                self.init[index[v]] &= set(vals)

        # Fold repeated variables into the relation and intersect constraints
        # sharing a scope.
        merged: dict[tuple, set] = {}
        folded: dict[tuple, frozenset] = {}
        d = A.domain_size
        for rel, scope in X.constraints:
            idx = [index[v] for v in scope]
            uniq = tuple(dict.fromkeys(idx))
            pattern = tuple(uniq.index(u) for u in idx)
            key = (rel, pattern)
            if key not in folded:
                folded[key] = self._fold(A.tuples(rel), pattern, len(uniq))
            allowed = folded[key]
            if len(allowed) == d ** len(uniq):
                continue  # no restriction
            if uniq in merged:
                merged[uniq] = merged[uniq] & allowed
            else:
                merged[uniq] = allowed
        self.unsat = False
        self.cons: list[tuple[tuple, tuple]] = []
        for scope, allowed in merged.items():
            if len(scope) == 1:
                self.init[scope[0]] &= {t[0] for t in allowed}
            else:
                self.cons.append((scope, tuple(sorted(allowed))))
            if not allowed:
                self.unsat = True
        self.watch: list[list[int]] = [[] for _ in range(n)]
        for ci, (scope, _) in enumerate(self.cons):
            for v in scope:
                self.watch[v].append(ci)

    @staticmethod
    def _fold(tuples, pattern, width) -> frozenset:
        """Tuples consistent with the repeated positions, projected to one
        entry per distinct variable."""
        out = set()
        for t in tuples:
            vals = [None] * width
            for j, a in zip(pattern, t):
                if vals[j] is None:
                    vals[j] = a
                elif vals[j] != a:
                    break
            else:
                out.add(tuple(vals))
        return frozenset(out)

    def propagate(self, doms: list[set], queue: list[int]) -> bool:
        pending = set(queue)
        queue = list(queue)
        cons = self.cons
        while queue:
            ci = queue.pop()
            pending.discard(ci)
            scope, allowed = cons[ci]
            ds = [doms[v] for v in scope]
            support = [set() for _ in scope]
            for t in allowed:
                for a, d in zip(t, ds):
                    if a not in d:
                        break
                else:
                    for s, a in zip(support, t):
                        s.add(a)
            for v, d, s in zip(scope, ds, support):
                if not s:
                    return False
                if len(s) < len(d):
                    doms[v] = s
                    for cj in self.watch[v]:
                        if cj != ci and cj not in pending:
                            pending.add(cj)
                            queue.append(cj)
        return True

    def solutions(self) -> Iterator[dict]:
        if self.unsat or any(not d for d in self.init):
            return
        doms = [set(d) for d in self.init]
        if not self.propagate(doms, list(range(len(self.cons)))):
            return
        limit = max(sys.getrecursionlimit(), 2 * len(doms) + 100)
        sys.setrecursionlimit(limit)
        yield from self._dfs(doms)

    def _pick(self, doms):
        best = None
        for i, d in enumerate(doms):
            if len(d) > 1:
                if self.cfg.variable_order == "index":
                    return i
                if best is None or len(d) < len(doms[best]):
                    best = i
        return best

    def _dfs(self, doms: list[set]) -> Iterator[dict]:
        var = self._pick(doms)
        if var is None:
            yield {v: next(iter(doms[i])) for i, v in enumerate(self.X.variables)}
            return
        values = sorted(doms[var])
        if self.cfg.value_order == "shuffle":
            self.rng.shuffle(values)
        for a in values:
            self.nodes += 1
            if self.nodes > self.node_limit:
                raise LimitExceeded(self.nodes)
            child = list(doms)
            child[var] = {a}
            if self.propagate(child, self.watch[var]):
                yield from self._dfs(child)


def iter_homomorphisms(X: Instance, A: RelationalStructure, cfg: SolverConfig | None = None,
                       domains: Mapping | None = None) -> Iterator[dict]:
    """Lazily enumerate all homomorphisms (deterministic order).

    ``domains`` optionally restricts individual variables to subsets of the
    template's domain.
    """
    return _Search(X, A, cfg or SolverConfig(), domains).solutions()


def find_homomorphism(X: Instance, A: RelationalStructure, cfg: SolverConfig | None = None,
                      domains: Mapping | None = None) -> dict | None:
    """Return some homomorphism ``X -> A`` as a dict, or ``None`` if none exists.

    Raises :class:`LimitExceeded` when the node limit stops the search early.
    """
    return next(iter_homomorphisms(X, A, cfg, domains), None)


def enumerate_homomorphisms(X: Instance, A: RelationalStructure, cfg: SolverConfig | None = None,
                            domains: Mapping | None = None) -> list[dict]:
    """All homomorphisms, truncated at ``cfg.solution_limit`` when one is set."""
    cfg = cfg or SolverConfig()
    out = []
    for h in iter_homomorphisms(X, A, cfg, domains):
        out.append(h)
        if cfg.solution_limit is not None and len(out) >= cfg.solution_limit:
            break
    return out


def has_homomorphism(X: Instance, A: RelationalStructure, cfg: SolverConfig | None = None) -> bool:
    return find_homomorphism(X, A, cfg) is not None


def find_structure_homomorphism(A: RelationalStructure, B: RelationalStructure,
                                cfg: SolverConfig | None = None) -> dict | None:
    """Homomorphism between structures, as an element map."""
    from .core import structure_as_instance

    if not A.is_similar(B):
        raise SignatureMismatch(f"{A!r} and {B!r} are not similar")
    return find_homomorphism(structure_as_instance(A), B, cfg)
