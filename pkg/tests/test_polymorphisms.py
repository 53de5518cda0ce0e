import itertools

import pytest

from pcspwb.core import RelationalStructure, builtin_template
from pcspwb.errors import ArityMismatch, DomainMismatch, NotAHomomorphism, ParseError
from pcspwb.polymorphisms import (
    OperationTable, PseudoSiggersWitness, all_tables, canonical_rotation,
    check_block_symmetric_on_pairs, compose_sandwich, cyclic_survey, enumerate_polymorphisms,
    find_polymorphism, indicator_instance, is_cyclic, is_pcsp_polymorphism, is_polymorphism,
    pseudo_siggers_search, threshold_table,
)

from oracles import all_boolean_tables, is_cyclic_table, preserves

OR = OperationTable.from_function(2, 2, lambda a, b: a | b)
AND = OperationTable.from_function(2, 2, lambda a, b: a & b)
MAJ = OperationTable.from_function(3, 2, lambda a, b, c: int(a + b + c >= 2))


def parity(n):
    return OperationTable.from_function(n, 2, lambda *a: sum(a) % 2)


# counts of n-ary polymorphisms on {0,1}, frozen from an independent brute-force run
FROZEN = {
    ("one-in-three", "one-in-three", 2): (2, 0),
    ("one-in-three", "nae", 2): (6, 2),
    ("nae", "nae", 2): (4, 0),
    ("one-in-three", "one-in-three", 3): (3, 0),
    ("one-in-three", "nae", 3): (36, 0),
    ("nae", "nae", 3): (6, 0),
}


def test_polymorphism_examples(one_in_three, nae):
    for n in (1, 2, 3):
        for i in range(n):
            assert is_polymorphism(OperationTable.projection(n, 2, i), one_in_three)
            assert is_polymorphism(OperationTable.projection(n, 2, i), nae)
    assert not is_polymorphism(AND, nae)
    assert not is_polymorphism(AND, one_in_three)
    assert is_pcsp_polymorphism(OR, one_in_three, nae)
    assert is_pcsp_polymorphism(OperationTable.projection(1, 2), one_in_three, nae)
    assert not is_pcsp_polymorphism(AND, one_in_three, nae)
    with pytest.raises(DomainMismatch):
        is_polymorphism(OperationTable.projection(2, 3), one_in_three)


def test_cyclic_examples():
    for n in (2, 3, 5):
        assert is_cyclic(parity(n))
    assert not is_cyclic(OperationTable.projection(2, 2))
    assert is_cyclic(MAJ)
    with pytest.raises(ArityMismatch):
        is_cyclic(OperationTable.projection(1, 2))


def test_block_symmetric_examples():
    assert check_block_symmetric_on_pairs(parity(4))
    assert not check_block_symmetric_on_pairs(OperationTable.projection(2, 2))
    assert check_block_symmetric_on_pairs(MAJ)


def test_indicator_sizes(one_in_three, nae):
    I = indicator_instance(one_in_three, 2)
    assert len(I.variables) == 4 and len(I.constraints) == 9
    I = indicator_instance(one_in_three, 3, "cyclic")
    assert len(I.variables) == 4 and len(I.constraints) == 27
    I = indicator_instance(nae, 2)
    assert len(I.variables) == 4 and len(I.constraints) == 36


def test_canonical_rotation_burnside():
    for n in (2, 3, 5):
        orbits = {canonical_rotation(t) for t in itertools.product((0, 1), repeat=n)}
        # Burnside count for prime n: (2^n + (n-1)*2) / n
        assert len(orbits) == (2 ** n + (n - 1) * 2) // n


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_counts(key):
    a, b, n = key
    A, B = builtin_template(a), builtin_template(b)
    total, cyc = FROZEN[key]
    assert len(enumerate_polymorphisms(A, B, n)) == total
    assert len(enumerate_polymorphisms(A, B, n, "cyclic")) == cyc


@pytest.mark.parametrize("a,b", [("one-in-three", "one-in-three"), ("one-in-three", "nae"),
                                 ("nae", "nae")])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_search_matches_exhaustive_tables(a, b, n):
    A, B = builtin_template(a), builtin_template(b)
    Ar, Br = A.relation("R"), B.relation("R")
    oracle = [t for t in all_boolean_tables(n) if preserves(t, n, Ar, Br)]
    found = {tuple(s.values) for s in enumerate_polymorphisms(A, B, n)}
    assert found == {tuple(t[k] for k in sorted(t)) for t in oracle}
    if n >= 2:
        cyc = {tuple(s.values) for s in enumerate_polymorphisms(A, B, n, "cyclic")}
        assert cyc == {v for v in found if is_cyclic(OperationTable(n, 2, v))}
        assert cyc == {tuple(t[k] for k in sorted(t)) for t in oracle if is_cyclic_table(t)}


def test_ternary_polymorphisms_of_one_in_three_are_projections(one_in_three):
    found = {s.values for s in enumerate_polymorphisms(one_in_three, None, 3)}
    assert found == {OperationTable.projection(3, 2, i).values for i in range(3)}


def test_find_examples(one_in_three, nae):
    s = find_polymorphism(one_in_three, nae, 2)
    assert s is not None and is_pcsp_polymorphism(s, one_in_three, nae)
    assert find_polymorphism(nae, nae, 3, "cyclic") is None
    assert find_polymorphism(one_in_three, one_in_three, 2, "cyclic") is None
    s = find_polymorphism(one_in_three, nae, 2, "cyclic")
    assert is_cyclic(s) and is_pcsp_polymorphism(s, one_in_three, nae)


def test_cyclic_survey_is_empty_for_one_in_three(one_in_three, nae):
    assert cyclic_survey(one_in_three, None, 5) == {2: None, 3: None, 5: None}
    assert cyclic_survey(nae, None, 5) == {2: None, 3: None, 5: None}


def test_threshold_tables(one_in_three, nae):
    for n in (2, 4, 5, 7):
        assert is_pcsp_polymorphism(threshold_table(n), one_in_three, nae)
        assert is_cyclic(threshold_table(n))


def test_sandwich_examples(one_in_three, nae):
    idm = {0: 0, 1: 1}
    p = OperationTable.projection(3, 2, 1)
    assert compose_sandwich(idm, p, idm, one_in_three, one_in_three, one_in_three).values == p.values
    for s in enumerate_polymorphisms(nae, None, 3):
        out = compose_sandwich(idm, s, idm, one_in_three, nae, nae)
        assert is_pcsp_polymorphism(out, one_in_three, nae)
    with pytest.raises(NotAHomomorphism):
        compose_sandwich(idm, p, idm, nae, one_in_three, one_in_three)


def test_sandwich_soundness_random_structures():
    import random

    rng = random.Random(2)
    checked = 0
    while checked < 30:
        d = rng.randint(2, 3)
        rel = [t for t in itertools.product(range(d), repeat=2) if rng.random() < 0.5]
        C = RelationalStructure(d, {"E": rel}, {"E": 2})
        A = RelationalStructure(2, {"E": [t for t in itertools.product(range(2), repeat=2)
                                          if rng.random() < 0.4]}, {"E": 2})
        polys = enumerate_polymorphisms(C, None, 2)
        fs = [m for m in itertools.product(range(d), repeat=2)
              if all((m[a], m[b]) in C.relation("E") for a, b in A.relation("E"))]
        if not fs:
            continue
        B = RelationalStructure(2, {"E": list(itertools.product(range(2), repeat=2))}, {"E": 2})
        g = [rng.randrange(2) for _ in range(d)]
        for s in polys[:10]:
            out = compose_sandwich(fs[0], s, g, A, C, B)
            assert is_pcsp_polymorphism(out, A, B)
        checked += 1


def test_pseudo_siggers(one_in_three):
    assert pseudo_siggers_search(one_in_three) is None
    point = RelationalStructure(1, {"R": [(0, 0, 0)]}, {"R": 3})
    w = pseudo_siggers_search(point)
    assert isinstance(w, PseudoSiggersWitness) and w.holds(point)


def test_pseudo_siggers_full_relation():
    full = RelationalStructure(2, {"R": list(itertools.product((0, 1), repeat=3))}, {"R": 3})
    w = pseudo_siggers_search(full)
    assert w is not None and w.holds(full)


def test_table_text_roundtrip():
    s = threshold_table(4)
    assert OperationTable.from_text(s.to_text()).values == s.values
    with pytest.raises(ParseError):
        OperationTable.from_text("op 2 2\n0 1 1")
    with pytest.raises(ParseError):
        OperationTable.from_text("nonsense")


def test_all_tables_count():
    assert sum(1 for _ in all_tables(2, 2)) == 16
    assert sum(1 for _ in all_tables(3, 2)) == 256
