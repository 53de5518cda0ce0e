"""Exact linear algebra over the integers and the rationals.

Integer systems are solved through a column-style Hermite normal form
``A U = H`` with ``U`` unimodular; rational systems through Gauss-Jordan
elimination on :class:`fractions.Fraction`. Nothing here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

IntMatrix = list[list[int]]


@dataclass(frozen=True)
class IntegerLinearSystem:
    """``A x = b`` with integer ``A`` (list of rows) and integer ``b``."""

    A: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    ncols: int

    def __init__(self, A: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None):
        A = tuple(tuple(int(a) for a in row) for row in A)
        b = tuple(int(x) for x in b)
        if len(A) != len(b):
            raise ValueError(f"{len(A)} rows but right-hand side of length {len(b)}")
        if ncols is None:
            if not A:
                raise ValueError("ncols is required for a system without rows")
            ncols = len(A[0])
        if any(len(row) != ncols for row in A):
            raise ValueError("coefficient matrix is not rectangular")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "ncols", ncols)

    def residual(self, x: Sequence) -> list:
        return [sum(a * v for a, v in zip(row, x)) - rhs for row, rhs in zip(self.A, self.b)]

    def is_solution(self, x: Sequence) -> bool:
        return len(x) == self.ncols and not any(self.residual(x))


@dataclass(frozen=True)
class AffineSolutionSpace:
    """``particular + span(basis)``; over Z the span is the integer lattice."""

    particular: tuple
    basis: tuple[tuple, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def point(self, coeffs: Sequence) -> tuple:
        x = list(self.particular)
        for c, vec in zip(coeffs, self.basis):
            if c:
                for i, v in enumerate(vec):
                    x[i] += c * v
        return tuple(x)


@dataclass(frozen=True)
class NoSolution:
    """Falsy marker returned instead of a solution.

    ``reason`` is ``"unsolvable"`` (no solution over the ring at all) or
    ``"forced"`` (coordinate ``coordinate`` equals the forbidden value on
    the whole solution space).
    """

    reason: str
    coordinate: int | None = None

    def __bool__(self):
        return False


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def determinant(M: Sequence[Sequence]) -> Fraction | int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return 1
    M = [list(row) for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def hermite_normal_form(A: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Column Hermite normal form.

    Returns ``(H, U)`` with ``A U = H``, ``U`` unimodular, ``H`` lower
    staircase: pivot columns come first, each pivot is positive, entries
    above a pivot are zero, and entries to its left lie in ``[0, pivot)``.
    """
    m = len(A)
    if m == 0 or not A[0]:
        raise ValueError("empty matrix")
    n = len(A[0])
    # work on columns: cols[j] is column j of H, ucols[j] column j of U
    cols = [[int(A[i][j]) for i in range(m)] for j in range(n)]
    ucols = [[int(i == j) for i in range(n)] for j in range(n)]

    def axpy(dst, src, q):
        # column dst -= q * column src
        cd, cs = cols[dst], cols[src]
        for i in range(m):
            if cs[i]:
                cd[i] -= q * cs[i]
        ud, us = ucols[dst], ucols[src]
        for i in range(n):
            if us[i]:
                ud[i] -= q * us[i]

    r = 0
    for i in range(m):
        if r == n:
            break
        while True:
            nz = [j for j in range(r, n) if cols[j][i]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][i]))
            if j0 != r:
                cols[r], cols[j0] = cols[j0], cols[r]
                ucols[r], ucols[j0] = ucols[j0], ucols[r]
            if len(nz) == 1:
                break
            piv = cols[r][i]
            for j in range(r + 1, n):
                if cols[j][i]:
                    axpy(j, r, _round_div(cols[j][i], piv))
        if cols[r][i] == 0:
            continue
        if cols[r][i] < 0:
            cols[r] = [-x for x in cols[r]]
            ucols[r] = [-x for x in ucols[r]]
        piv = cols[r][i]
        for j in range(r):
            q = cols[j][i] // piv
            if q:
                axpy(j, r, q)
        r += 1
    H = [[cols[j][i] for j in range(n)] for i in range(m)]
    U = [[ucols[j][i] for j in range(n)] for i in range(n)]
    return H, U


def _round_div(a: int, b: int) -> int:
    """Nearest-integer quotient, keeps Euclidean remainders small."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1
    return q


def hnf_pivots(H: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """``(row, column)`` of each pivot of a column-style HNF."""
    pivots = []
    c = 0
    ncols = len(H[0]) if H else 0
    for i, row in enumerate(H):
        if c < ncols and row[c] != 0:
            pivots.append((i, c))
            c += 1
    return pivots


def is_hermite_normal_form(H: Sequence[Sequence[int]]) -> bool:
    """Check the staircase shape, positive pivots and reduced left entries."""
    if not H:
        return True
    n = len(H[0])
    pivots = hnf_pivots(H)
    rank = len(pivots)
    prow = {c: i for i, c in pivots}
    for c in range(n):
        col = [row[c] for row in H]
        if c >= rank:
            if any(col):
                return False
            continue
        i0 = prow[c]
        if any(col[:i0]) or col[i0] <= 0:
            return False
    for i, c in pivots:
        if any(not (0 <= H[i][j] < H[i][c]) for j in range(c)):
            return False
    # rows without a pivot must be zero beyond the pivots seen so far
    c = 0
    for i, row in enumerate(H):
        if c < rank and prow[c] == i:
            c += 1
        elif any(row[c:]):
            return False
    return True


def solve_integer_system(system: IntegerLinearSystem) -> AffineSolutionSpace | NoSolution:
    """All integer solutions of ``A x = b``, or ``NoSolution('unsolvable')``."""
    n = system.ncols
    if not system.A:
        basis = tuple(tuple(int(i == j) for i in range(n)) for j in range(n))
        return AffineSolutionSpace(tuple([0] * n), basis)
    H, U = hermite_normal_form(system.A)
    y = [0] * n
    c = 0
    for i, row in enumerate(H):
        acc = system.b[i] - sum(row[j] * y[j] for j in range(c))
        if c < n and row[c] != 0:
            q, rem = divmod(acc, row[c])
            if rem:
                return NoSolution("unsolvable")
            y[c] = q
            c += 1
        elif acc:
            return NoSolution("unsolvable")
    rank = c
    x = tuple(sum(U[i][j] * y[j] for j in range(rank)) for i in range(n))
    basis = tuple(tuple(U[i][j] for i in range(n)) for j in range(rank, n))
    return AffineSolutionSpace(x, basis)


def rational_solution_space(system: IntegerLinearSystem) -> AffineSolutionSpace | NoSolution:
    """Gauss-Jordan over Q: particular solution (free variables at 0) plus a
    basis of the homogeneous solutions, one vector per free variable."""
    n = system.ncols
    # sparse rows: {column: coefficient}, the right-hand side sits under key n
    rows = []
    for row, b in zip(system.A, system.b):
        r = {j: Fraction(a) for j, a in enumerate(row) if a}
        if b:
            r[n] = Fraction(b)
        rows.append(r)
    pivot_rows: list[tuple[int, dict]] = []
    for c in range(n):
        p = next((i for i, r in enumerate(rows) if c in r), None)
        if p is None:
            continue
        prow = rows.pop(p)
        inv = 1 / prow[c]
        prow = {j: v * inv for j, v in prow.items()}
        for r in rows:
            _eliminate(r, prow, c)
        for _, r in pivot_rows:
            _eliminate(r, prow, c)
        pivot_rows.append((c, prow))
    if any(r.get(n) for r in rows):
        return NoSolution("unsolvable")
    pivots = {c for c, _ in pivot_rows}
    free = [c for c in range(n) if c not in pivots]
    x = [Fraction(0)] * n
    for c, r in pivot_rows:
        x[c] = r.get(n, Fraction(0))
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for c, r in pivot_rows:
            if f in r:
                vec[c] = -r[f]
        basis.append(tuple(vec))
    return AffineSolutionSpace(tuple(x), tuple(basis))


def _eliminate(row: dict, prow: dict, c: int) -> None:
    f = row.get(c)
    if not f:
        return
    for j, v in prow.items():
        w = row.get(j, 0) - f * v
        if w:
            row[j] = w
        else:
            row.pop(j, None)


def solve_rational_avoiding(system: IntegerLinearSystem, forbidden) -> tuple[Fraction, ...] | NoSolution:
    """A rational solution none of whose coordinates equals ``forbidden``.

    Every coordinate is an affine function of the free parameters. The
    parameters are fixed one after another, each to the smallest
    nonnegative integer at which no coordinate whose last free parameter
    is the current one hits ``forbidden``. A coordinate of that kind rules
    out a single value, so each scan stops after a bounded number of steps.
    """
    forbidden = Fraction(forbidden)
    space = rational_solution_space(system)
    if not space:
        return space
    n = system.ncols
    k = space.rank
    # coordinate i = particular[i] + sum_j basis[j][i] * t_j
    last = [max((j for j in range(k) if space.basis[j][i] != 0), default=-1) for i in range(n)]
    for i in range(n):
        if last[i] < 0 and space.particular[i] == forbidden:
            return NoSolution("forced", i)
    by_last: dict[int, list[int]] = {}
    for i, j in enumerate(last):
        by_last.setdefault(j, []).append(i)
    partial = list(space.particular)
    params = []
    for j in range(k):
        vec = space.basis[j]
        watched = by_last.get(j, [])
        t = 0
        while any(partial[i] + t * vec[i] == forbidden for i in watched):
            t += 1
        params.append(t)
        if t:
            partial = [a + t * v for a, v in zip(partial, vec)]
    return tuple(partial)
