"""PCSP(1-in-3, NAE) solved through the affine relaxation ``x + y + z = 1``.

Every triple becomes one linear equation. Over Z a solution is rounded
with threshold 0 (``> 0`` means 1); over Q a solution avoiding 1/3 is
rounded with threshold 1/3. In both cases the rounded assignment is
not-all-equal on every triple, and an unsolvable system certifies that no
1-in-3 assignment exists.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import ArityMismatch, UnknownName
from .linear import (
    IntegerLinearSystem,
    solve_integer_system,
    solve_rational_avoiding,
)

ONE_THIRD = Fraction(1, 3)

_METHODS = {"integers": "integers", "z": "integers", "rationals": "rationals", "q": "rationals"}


@dataclass(frozen=True)
class TripleInstance:
    variables: tuple[Hashable, ...]
    triples: tuple[tuple[Hashable, Hashable, Hashable], ...]

    def __init__(self, variables: Iterable[Hashable] | None, triples: Iterable[Sequence[Hashable]]):
        triples = tuple(tuple(t) for t in triples)
        if variables is None:
            variables = [v for t in triples for v in t]
        variables = tuple(dict.fromkeys(variables))
        known = set(variables)
        for t in triples:
            if len(t) != 3:
                raise ArityMismatch(f"triple {t} does not have three entries")
            for v in t:
                if v not in known:
                    raise UnknownName(f"triple {t} references undeclared variable {v!r}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "triples", triples)

    def to_instance(self):
        from .core import Instance

        return Instance(self.variables, [("R", t) for t in self.triples], {"R": 3})


@dataclass(frozen=True)
class PcspAnswer:
    verdict: bool
    assignment: dict | None = None
    method: str = "integers"
    trace: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return "yes" if self.verdict else "no"


def triples_to_system(X: TripleInstance) -> IntegerLinearSystem:
    """One row per triple, coefficient = multiplicity, right-hand side 1."""
    col = {v: j for j, v in enumerate(X.variables)}
    rows = []
    for t in X.triples:
        row = [0] * len(col)
        for v in t:
            row[col[v]] += 1
        rows.append(row)
    return IntegerLinearSystem(rows, [1] * len(rows), ncols=len(col))


def round_integer(phi: Sequence[int]) -> tuple[int, ...]:
    return tuple(1 if x > 0 else 0 for x in phi)


def round_rational(phi: Sequence) -> tuple[int, ...]:
    out = []
    for i, x in enumerate(phi):
        x = Fraction(x)
        if x == ONE_THIRD:
            raise ValueError(f"coordinate {i} equals 1/3; rounding is undefined")
        out.append(0 if x < ONE_THIRD else 1)
    return tuple(out)


def verify_assignment(X: TripleInstance, a: Mapping | Sequence[int], mode: str) -> bool:
    """Check ``a`` against every triple in mode ``one-in-three`` or ``nae``."""
    if not isinstance(a, Mapping):
        a = dict(zip(X.variables, a))
    missing = [v for v in X.variables if v not in a]
    if missing:
        raise ValueError(f"partial assignment: no value for {missing[0]!r}")
    if any(a[v] not in (0, 1) for v in X.variables):
        raise ValueError("assignment values must be 0 or 1")
    mode = mode.lower().replace("_", "-")
    for t in X.triples:
        ones = sum(a[v] for v in t)
        if mode in ("one-in-three", "1-in-3"):
            if ones != 1:
                return False
        elif mode == "nae":
            if ones in (0, 3):
                return False
        else:
            raise ValueError(f"unknown mode {mode!r}")
    return True


def solve_pcsp(X: TripleInstance, method: str = "integers") -> PcspAnswer:
    """Promise decision with an NAE witness on ``yes``.

    ``yes`` means the relaxed system is solvable (so ``X`` is NAE
    satisfiable); ``no`` certifies that ``X`` has no 1-in-3 assignment.
    """
    try:
        method = _METHODS[method.lower()]
    except KeyError:
        raise ValueError(f"unknown method {method!r}") from None
    system = triples_to_system(X)
    start = time.perf_counter()
    trace = {"variables": len(X.variables), "equations": len(X.triples)}
    if method == "integers":
        space = solve_integer_system(system)
        if not space:
            trace["seconds"] = time.perf_counter() - start
            return PcspAnswer(False, None, method, trace)
        phi = space.particular
        psi = round_integer(phi)
        trace["lattice_rank"] = space.rank
    else:
        phi = solve_rational_avoiding(system, ONE_THIRD)
        if not phi:
            trace["reason"] = phi.reason
            trace["seconds"] = time.perf_counter() - start
            return PcspAnswer(False, None, method, trace)
        psi = round_rational(phi)
    trace["max_abs_coordinate"] = max((abs(x) for x in phi), default=0)
    trace["seconds"] = time.perf_counter() - start
    return PcspAnswer(True, dict(zip(X.variables, psi)), method, trace)


def gen_planted(n: int, m: int, seed: int = 0) -> tuple[TripleInstance, dict]:
    """Random instance with a planted 1-in-3 assignment.

    Roughly a third of the variables are set to 1; every triple holds one
    of them and two (not necessarily distinct) zero variables in shuffled
    positions. Returns ``(instance, plant)``.
    """
    if n < 3 or m < 0:
        raise ValueError(f"infeasible parameters n={n}, m={m} (need n >= 3, m >= 0)")
    rng = random.Random(seed)
    names = [f"x{i}" for i in range(n)]
    n_ones = max(1, min(n - 1, round(n / 3)))
    ones = set(rng.sample(range(n), n_ones))
    plant = {names[i]: int(i in ones) for i in range(n)}
    one_vars = sorted(ones)
    zero_vars = [i for i in range(n) if i not in ones]
    triples = []
    for _ in range(m):
        t = [rng.choice(one_vars), rng.choice(zero_vars), rng.choice(zero_vars)]
        rng.shuffle(t)
        triples.append(tuple(names[i] for i in t))
    return TripleInstance(names, triples), plant
