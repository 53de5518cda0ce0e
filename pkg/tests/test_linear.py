import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from pcspwb.linear import (
    IntegerLinearSystem, NoSolution, determinant, hermite_normal_form, hnf_pivots,
    is_hermite_normal_form, matmul, rational_solution_space, solve_integer_system,
    solve_rational_avoiding,
)

from oracles import box_solutions, det_laplace, matmul as oracle_matmul

matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def test_hnf_small_examples():
    H, U = hermite_normal_form([[4, 6]])
    assert H == [[2, 0]] and abs(det_laplace(U)) == 1
    I = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert hermite_normal_form(I) == (I, I)


def test_hnf_random_5x7():
    rng = random.Random(0)
    for _ in range(20):
        A = [[rng.randint(-9, 9) for _ in range(7)] for _ in range(5)]
        H, U = hermite_normal_form(A)
        assert oracle_matmul(A, U) == H
        assert abs(det_laplace(U)) == 1
        assert is_hermite_normal_form(H)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_hnf_properties(A):
    H, U = hermite_normal_form(A)
    assert oracle_matmul(A, U) == H
    assert abs(determinant(U)) == 1
    assert is_hermite_normal_form(H)
    for r, c in hnf_pivots(H):
        assert H[r][c] > 0
        assert all(0 <= H[r][j] < H[r][c] for j in range(c))


def test_bareiss_matches_laplace():
    rng = random.Random(4)
    for _ in range(50):
        n = rng.randint(1, 5)
        M = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        assert determinant(M) == det_laplace(M)


def test_integer_examples():
    res = solve_integer_system(IntegerLinearSystem([[3]], [1]))
    assert isinstance(res, NoSolution) and not res and res.reason == "unsolvable"
    sp = solve_integer_system(IntegerLinearSystem([[1, 1, 1]], [1]))
    assert sp.rank == 2
    assert sum(sp.particular) == 1
    for vec in sp.basis:
        assert sum(vec) == 0


def test_planted_integer_systems():
    rng = random.Random(1)
    for _ in range(100):
        r, c = rng.randint(1, 6), rng.randint(1, 6)
        A = [[rng.randint(-7, 7) for _ in range(c)] for _ in range(r)]
        x = [rng.randint(-9, 9) for _ in range(c)]
        b = [sum(a * v for a, v in zip(row, x)) for row in A]
        sys_ = IntegerLinearSystem(A, b)
        sp = solve_integer_system(sys_)
        assert sp and sys_.is_solution(sp.particular)
        for vec in sp.basis:
            assert not any(sum(a * v for a, v in zip(row, vec)) for row in A)


def _lattice_contains(sp, x):
    """Is ``x - particular`` an integer combination of the basis?"""
    if not sp.basis:
        return tuple(x) == tuple(sp.particular)
    B = [list(col) for col in zip(*sp.basis)]
    diff = [a - b for a, b in zip(x, sp.particular)]
    aug = IntegerLinearSystem(B, diff)
    return bool(solve_integer_system(aug))


def test_box_completeness():
    rng = random.Random(2)
    for _ in range(150):
        nv = rng.randint(1, 4)
        r = rng.randint(1, 3)
        A = [[rng.randint(-3, 3) for _ in range(nv)] for _ in range(r)]
        b = [rng.randint(-4, 4) for _ in range(r)]
        sols = list(box_solutions(A, b))
        sp = solve_integer_system(IntegerLinearSystem(A, b))
        if sols:
            assert sp, (A, b)
            for x in sols:
                assert _lattice_contains(sp, x)
        if sp:
            assert IntegerLinearSystem(A, b).is_solution(sp.particular)


def test_rational_space_is_exact():
    rng = random.Random(3)
    for _ in range(60):
        r, c = rng.randint(1, 5), rng.randint(1, 6)
        A = [[rng.randint(-4, 4) for _ in range(c)] for _ in range(r)]
        b = [rng.randint(-4, 4) for _ in range(r)]
        sp = rational_solution_space(IntegerLinearSystem(A, b))
        if not sp:
            continue
        assert all(isinstance(v, (int, Fraction)) for v in sp.particular)
        assert not any(IntegerLinearSystem(A, b).residual(sp.particular))
        for vec in sp.basis:
            assert not any(sum(a * v for a, v in zip(row, vec)) for row in A)


def test_rational_avoiding_examples():
    third = Fraction(1, 3)
    res = solve_rational_avoiding(IntegerLinearSystem([[3]], [1]), third)
    assert not res and res.reason == "forced" and res.coordinate == 0
    # x + y = 2/3 scaled by 3
    x = solve_rational_avoiding(IntegerLinearSystem([[3, 3]], [2]), third)
    assert x and 3 * x[0] + 3 * x[1] == 2 and third not in x
    x = solve_rational_avoiding(IntegerLinearSystem([[1, 1, 1]], [1]), third)
    assert sum(x) == 1 and third not in x
    res = solve_rational_avoiding(IntegerLinearSystem([[1, 1], [1, 1]], [0, 1]), third)
    assert not res and res.reason == "unsolvable"


@settings(max_examples=150, deadline=None)
@given(matrices, st.integers(-3, 3))
def test_rational_avoiding_property(A, forb):
    rng = random.Random(len(A))
    b = [rng.randint(-5, 5) for _ in A]
    sys_ = IntegerLinearSystem(A, b)
    forbidden = Fraction(forb, 3)
    x = solve_rational_avoiding(sys_, forbidden)
    if x:
        assert not any(sys_.residual(x))
        assert forbidden not in x
    elif x.reason == "forced":
        sp = rational_solution_space(sys_)
        assert sp and sp.particular[x.coordinate] == forbidden
        assert all(vec[x.coordinate] == 0 for vec in sp.basis)
    else:
        assert not rational_solution_space(sys_)


def test_matmul_agrees():
    A = [[1, 2], [3, 4]]
    assert matmul(A, A) == oracle_matmul(A, A)
