import itertools
import random

import pytest

from pcspwb.core import Instance, is_homomorphism, satisfies
from pcspwb.errors import ArityMismatch, ParseError, SignatureMismatch
from pcspwb.hom_solver import find_homomorphism, has_homomorphism
from pcspwb.ppcon import (
    ConstructionChain, EqAtom, PpFormula, PpPowerSpec, RelAtom, check_relaxation,
    decode_power_assignment, evaluate_pp, evaluate_pp_naive, gadget_reduce, identity_power_spec,
    pp_power,
)

from oracles import brute_has_hom
from pp_samples import SPECS, random_instance


def brute_pp(phi, A):
    """Independent evaluator: enumerate free tuples, then search for witnesses."""
    out = set()
    for free_vals in itertools.product(A.domain, repeat=len(phi.free)):
        for ex_vals in itertools.product(A.domain, repeat=len(phi.exists)):
            env = dict(zip(phi.free, free_vals))
            env.update(zip(phi.exists, ex_vals))
            if all((env[a.left] == env[a.right]) if isinstance(a, EqAtom)
                   else tuple(env[v] for v in a.args) in A.relation(a.rel) for a in phi.atoms):
                out.add(free_vals)
                break
    return out


def test_evaluate_examples(one_in_three, nae):
    phi = PpFormula(("x", "y"), ("z",), [RelAtom("R", ("x", "y", "z"))])
    assert evaluate_pp(phi, one_in_three) == {(1, 0), (0, 1), (0, 0)}
    phi = PpFormula(("x",), (), [EqAtom("x", "x")])
    assert evaluate_pp(phi, nae) == {(0,), (1,)}
    phi = PpFormula(("x", "y"), (), [RelAtom("R", ("x", "x", "y"))])
    assert evaluate_pp(phi, one_in_three) == {(0, 1)}
    with pytest.raises(SignatureMismatch):
        evaluate_pp(PpFormula(("x",), (), [RelAtom("Q", ("x",))]), one_in_three)


def test_formula_validation():
    with pytest.raises(ValueError):
        PpFormula((), (), [])
    with pytest.raises(ValueError):
        PpFormula(("x",), (), [RelAtom("R", ("x", "y", "x"))])


def _random_formula(rng):
    nv = rng.randint(1, 6)
    vs = [f"v{i}" for i in range(nv)]
    nfree = rng.randint(1, min(nv, 3))
    atoms = []
    for _ in range(rng.randint(0, 4)):
        if rng.random() < 0.2:
            atoms.append(EqAtom(rng.choice(vs), rng.choice(vs)))
        else:
            atoms.append(RelAtom("R", tuple(rng.choice(vs) for _ in range(3))))
    return PpFormula(vs[:nfree], vs[nfree:], atoms)


def test_evaluate_agrees_with_oracles(one_in_three, nae):
    rng = random.Random(6)
    for _ in range(300):
        phi = _random_formula(rng)
        for A in (one_in_three, nae):
            got = evaluate_pp(phi, A)
            assert got == evaluate_pp_naive(phi, A) == brute_pp(phi, A)


def test_formula_text_roundtrip():
    rng = random.Random(1)
    for _ in range(50):
        phi = _random_formula(rng)
        assert PpFormula.from_text(phi.to_text()) == phi
    one_line = PpFormula.from_text("free x y ; exists z ; atom R x y z ; eq x z")
    assert one_line.atoms == (RelAtom("R", ("x", "y", "z")), EqAtom("x", "z"))
    with pytest.raises(ParseError):
        PpFormula.from_text("free x ; atom R x y")
    with pytest.raises(ParseError):
        PpFormula.from_text("frobnicate x")


def test_spec_text_roundtrip():
    for spec in SPECS.values():
        again = PpPowerSpec.from_text(spec.to_text())
        assert again.n == spec.n and again.formulas == spec.formulas
    with pytest.raises(ParseError):
        PpPowerSpec.from_text("power 2\ndefine P\nfree a b c\nend\n")


def test_power_identity_and_projection(one_in_three, nae):
    A2, B2 = pp_power(identity_power_spec(one_in_three), one_in_three, nae)
    assert A2 == one_in_three and B2.relation("R") == nae.relation("R")
    spec = SPECS["project"]
    A2, _ = pp_power(spec, one_in_three, one_in_three)
    assert len(A2.relation("S")) == 3


def test_pairs_power_matches_brute_force(one_in_three, nae):
    spec = SPECS["pairs"]
    for base in (one_in_three, nae):
        P, _ = pp_power(spec, base, base)
        assert P.domain_size == 4
        for name, phi in spec.formulas.items():
            raw = brute_pp(phi, base)
            regrouped = {tuple(2 * t[i] + t[i + 1] for i in range(0, len(t), 2)) for t in raw}
            assert P.relation(name) == regrouped


def test_relaxation_examples(one_in_three, nae):
    w = check_relaxation(one_in_three, nae, nae, nae)
    assert w is not None
    assert is_homomorphism(w.f, one_in_three, nae) and is_homomorphism(w.g, nae, nae)
    w = check_relaxation(one_in_three, one_in_three, one_in_three, one_in_three)
    assert w is not None
    assert check_relaxation(nae, nae, one_in_three, one_in_three) is None


def test_relaxation_reduction_is_sound(one_in_three, nae):
    # (1-in-3, NAE) relaxes (NAE, NAE): the identity reduction preserves yes/no sides
    w = check_relaxation(one_in_three, nae, nae, nae)
    rng = random.Random(3)
    for _ in range(50):
        X = random_instance(identity_power_spec(nae), rng)
        h = find_homomorphism(X, one_in_three)
        if h is not None:
            assert satisfies(X, nae, {v: w.f[a] for v, a in h.items()})
        h = find_homomorphism(X, nae)
        if h is not None:
            assert satisfies(X, nae, {v: w.g[a] for v, a in h.items()})


def test_gadget_examples():
    spec = SPECS["project"]
    X = Instance(["a", "b"], [("S", ("a", "b"))], {"S": 2})
    G = gadget_reduce(X, spec)
    assert G.variables == ("a", "b", "z_1")
    assert G.constraints == (("R", ("a", "b", "z_1")),)
    empty = Instance(["a", "b", "c"], [], {"P": 2})
    G = gadget_reduce(empty, SPECS["pairs"])
    assert len(G.variables) == 6 and not G.constraints
    with pytest.raises(ArityMismatch):
        gadget_reduce(Instance(["a"], [("S", ("a", "a", "a"))], {"S": 3}), spec)


def test_gadget_equalities_are_merged():
    X = Instance(["a", "b"], [("D", ("a", "b"))], {"D": 2})
    G = gadget_reduce(X, SPECS["equalities"])
    assert "w_1" not in G.variables
    assert G.constraints == (("R", ("a", "b", "b")),)


@pytest.mark.parametrize("name", sorted(SPECS))
def test_gadget_equivalence(name, one_in_three, nae):
    spec = SPECS[name]
    A2, B2 = pp_power(spec, one_in_three, nae)
    rng = random.Random(name)
    for _ in range(40):
        X = random_instance(spec, rng)
        G, copies = gadget_reduce(X, spec, with_map=True)
        to_a2 = brute_has_hom(X, A2)
        h = find_homomorphism(G, one_in_three)
        assert to_a2 == (h is not None)
        if h is not None:
            assert satisfies(X, A2, decode_power_assignment(h, copies, 2))
        if has_homomorphism(G, nae):
            assert brute_has_hom(X, B2)


def test_construction_chain(one_in_three, nae):
    chain = ConstructionChain(one_in_three, nae, [("power", SPECS["project"])])
    (A, B), (A2, B2) = chain.templates()
    X = Instance(["a", "b"], [("S", ("a", "b"))], {"S": 2})
    assert chain.reduce(X) == gadget_reduce(X, SPECS["project"])
    bad = ConstructionChain(nae, nae, [("relax", (nae, one_in_three))])
    with pytest.raises(ValueError):
        bad.templates()
