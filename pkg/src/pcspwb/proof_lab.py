"""The star-composed operation ``t`` and the matrix toolkit around it.

For a p-ary operation ``s`` the operation ``t`` of arity ``p*p`` applies
``s`` to every column of a p x p matrix and then ``s`` to the column
results. ``t`` is never tabulated; evaluating it costs ``p + 1`` calls of
``s``, which keeps prime arities in the hundreds cheap.

Matrices are numpy integer arrays. Zero-one matrices carry an exact area
(fraction of ones), and the toolkit provides the tuples ``tau(i)``, the
column-prefix matrices ``rho(k_1, ..., k_p)``, cyclic shifts, covers, and
the comparison of a matrix with the all-zero / all-one matrices under an
outer map ``g``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .core import ONE_IN_THREE_TUPLES, RelationalStructure, builtin_template, is_homomorphism
from .errors import WorkbenchError
from .polymorphisms import OperationTable, is_polymorphism

ONE_THIRD = Fraction(1, 3)


class NotACover(WorkbenchError, ValueError):
    pass


class BoundViolation(WorkbenchError, ValueError):
    pass


class PigeonholeFailure(WorkbenchError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass
class BlackBoxOperation:
    """A p-ary operation given by a procedure rather than a table.

    ``fn`` receives a tuple of length ``arity``. With ``cyclic=True`` the
    constructor spot-checks cyclicity on random tuples over ``domain_size``
    elements.
    """

    arity: int
    fn: Callable[[tuple], int]
    cyclic: bool = False
    name: str = "s"
    domain_size: int = 2
    table: OperationTable | None = None
    calls: int = field(default=0, compare=False)
    spot_checks: int = 32

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("arity must be positive")
        if self.cyclic and self.spot_checks:
            rng = random.Random(self.arity)
            for _ in range(self.spot_checks):
                args = tuple(rng.randrange(self.domain_size) for _ in range(self.arity))
                if self.fn(args) != self.fn(args[1:] + args[:1]):
                    raise ValueError(f"{self.name} is declared cyclic but fails on {args}")

    def __call__(self, args: Sequence[int]) -> int:
        args = tuple(int(a) for a in args)
        if len(args) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} arguments, got {len(args)}")
        self.calls += 1
        return self.fn(args)

    @classmethod
    def parity(cls, p: int) -> "BlackBoxOperation":
        return cls(p, lambda a: sum(a) % 2, cyclic=True, name="parity")

    @classmethod
    def threshold(cls, p: int, fraction=Fraction(1, 2)) -> "BlackBoxOperation":
        """1 iff the number of ones exceeds ``fraction * p``."""
        cut = Fraction(fraction) * p
        return cls(p, lambda a: int(sum(a) > cut), cyclic=True, name=f"threshold>{fraction}")

    @classmethod
    def projection(cls, p: int, coordinate: int = 0, domain_size: int = 2) -> "BlackBoxOperation":
        return cls(p, lambda a: a[coordinate], cyclic=False, name=f"proj{coordinate}",
                   domain_size=domain_size)

    @classmethod
    def from_table(cls, table: OperationTable, cyclic: bool | None = None) -> "BlackBoxOperation":
        if cyclic is None:
            cyclic = table.arity >= 2 and all(
                table(*a) == table(*(a[1:] + a[:1])) for a in table.arguments())
        return cls(table.arity, lambda a: table(*a), cyclic=cyclic, name="table",
                   domain_size=table.domain_size, table=table, spot_checks=0)


def _as_map(g) -> Callable[[int], int]:
    if g is None:
        return lambda x: x
    if callable(g):
        return g
    if isinstance(g, Mapping):
        return g.__getitem__
    return lambda x: g[x]


# -- matrices ---------------------------------------------------------------

def as_matrix(X) -> np.ndarray:
    M = np.asarray(X, dtype=np.int64)
    if M.ndim == 1:
        p = int(round(len(M) ** 0.5))
        if p * p != len(M):
            raise ValueError(f"flat tuple of length {len(M)} is not a square")
        M = M.reshape(p, p)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 2:
        raise ValueError(f"expected a square matrix with side >= 2, got shape {M.shape}")
    return M


def _check_binary(M: np.ndarray):
    if not np.isin(M, (0, 1)).all():
        raise ValueError("matrix has entries other than 0 and 1")


def zeros(p: int) -> np.ndarray:
    return np.zeros((p, p), dtype=np.int64)


def ones(p: int) -> np.ndarray:
    return np.ones((p, p), dtype=np.int64)


def eval_t(s: BlackBoxOperation, X) -> int:
    """``s`` on each column, then ``s`` on the p results."""
    M = as_matrix(X)
    p = M.shape[0]
    if p != s.arity:
        raise ValueError(f"matrix side {p} does not match arity {s.arity}")
    return s([s(M[:, j]) for j in range(p)])


def area(X) -> Fraction:
    M = as_matrix(X)
    _check_binary(M)
    return Fraction(int(M.sum()), M.size)


def tau(i: int, p: int, flat: bool = False) -> np.ndarray:
    """``i`` leading ones in row-major order."""
    if not 0 <= i <= p * p:
        raise ValueError(f"tau index {i} outside 0..{p * p}")
    v = np.zeros(p * p, dtype=np.int64)
    v[:i] = 1
    return v if flat else v.reshape(p, p)


def rho(*ks: int) -> np.ndarray:
    """Column ``j`` starts with ``ks[j]`` ones; zero-length columns are allowed."""
    if len(ks) == 1 and not isinstance(ks[0], (int, np.integer)):
        ks = tuple(ks[0])
    p = len(ks)
    M = np.zeros((p, p), dtype=np.int64)
    for j, k in enumerate(ks):
        if not 0 <= k <= p:
            raise ValueError(f"column height {k} outside 0..{p}")
        M[:k, j] = 1
    return M


def column_heights(X) -> tuple[int, ...] | None:
    """``(k_1, ..., k_p)`` if ``X`` equals ``rho(k_1, ..., k_p)``, else ``None``."""
    M = as_matrix(X)
    ks = tuple(int(c) for c in M.sum(axis=0))
    if np.isin(M, (0, 1)).all() and np.array_equal(M, rho(*ks)):
        return ks
    return None


def step_size(X) -> int | None:
    """``k - l`` when ``X = rho(k,...,k, l,...,l)`` with ``k >= l``, else ``None``."""
    ks = column_heights(X)
    if ks is None:
        return None
    k = ks[0]
    j = 0
    while j < len(ks) and ks[j] == k:
        j += 1
    rest = ks[j:]
    if not rest:
        return 0
    l = rest[0]
    if any(x != l for x in rest) or l > k:
        return None
    return k - l


def is_almost_rectangle(X, c_size: int, step_factor: int = 5) -> bool:
    step = step_size(X)
    return step is not None and 0 <= step <= step_factor * c_size


def shift(X, mode: str, amounts) -> np.ndarray:
    """Cyclic shifts.

    ``columns-down``: column j moves down by ``amounts`` (or ``amounts[j]``);
    ``rows-left``: every row moves left by ``amounts``;
    ``flat-cyclic``: the row-major tuple moves right by ``amounts``.
    """
    M = as_matrix(X)
    p = M.shape[0]
    if mode == "columns-down":
        amt = [amounts] * p if np.isscalar(amounts) else list(amounts)
        if len(amt) != p or any(not 0 <= a <= p for a in amt):
            raise ValueError(f"column shifts must be {p} values in 0..{p}")
        out = M.copy()
        for j, a in enumerate(amt):
            out[:, j] = np.roll(M[:, j], int(a))
        return out
    if mode == "rows-left":
        if not 0 <= amounts <= p:
            raise ValueError(f"row shift {amounts} outside 0..{p}")
        return np.roll(M, -int(amounts), axis=1)
    if mode == "flat-cyclic":
        if not 0 <= amounts <= p * p:
            raise ValueError(f"flat shift {amounts} outside 0..{p * p}")
        return np.roll(M.ravel(), int(amounts)).reshape(p, p)
    raise ValueError(f"unknown shift mode {mode!r}")


def is_cover(X, Y, Z) -> bool:
    """Every position holds a one in exactly one of the three matrices."""
    Ms = [as_matrix(M) for M in (X, Y, Z)]
    if not (Ms[0].shape == Ms[1].shape == Ms[2].shape):
        raise ValueError("cover candidates differ in size")
    for M in Ms:
        _check_binary(M)
    return bool(((Ms[0] + Ms[1] + Ms[2]) == 1).all())


def line_cover(i: int, j: int, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``tau(i)``, ``tau(j)`` moved right by ``i`` and ``tau(p*p - i - j)`` moved
    right by ``i + j`` (row-major); a cover whenever ``i + j <= p*p``."""
    k = p * p - i - j
    if k < 0:
        raise ValueError("i + j exceeds p*p")
    return (tau(i, p), shift(tau(j, p), "flat-cyclic", i), shift(tau(k, p), "flat-cyclic", i + j))


def stack_to_cover(X, Y, Z) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Stack three column-prefix matrices whose heights sum to ``p`` per column:
    ``Y``'s columns move down by ``X``'s heights and ``Z``'s by ``X + Y``'s."""
    hx, hy, hz = (column_heights(M) for M in (X, Y, Z))
    if None in (hx, hy, hz):
        raise NotACover("arguments must be column-prefix matrices")
    p = len(hx)
    if any(a + b + c != p for a, b, c in zip(hx, hy, hz)):
        raise NotACover("column heights do not add up to p")
    Y2 = shift(Y, "columns-down", [a % p for a in hx])
    Z2 = shift(Z, "columns-down", [(a + b) % p for a, b in zip(hx, hy)])
    return as_matrix(X), Y2, Z2


def step_reduction(k: int, l: int, m: int, p: int) -> dict:
    """Matrices used when the area of ``X = rho(k^m, l^(p-m))`` is large.

    ``Y_i = rho(l_i^m, k_i^(p-m))`` with ``l_1 + l_2 = p - k``,
    ``k_1 + k_2 = p - l`` and both differences in ``{0, 1}``. ``cover`` is
    ``X, Y_1', Y_2'`` after the column shifts of :func:`stack_to_cover`;
    ``Y1_rotated``/``Y2_rotated`` are ``Y_i`` with rows moved left by ``m``.
    """
    l1, l2 = (p - k + 1) // 2, (p - k) // 2
    k1, k2 = (p - l + 1) // 2, (p - l) // 2
    X = rho(*([k] * m + [l] * (p - m)))
    Y1 = rho(*([l1] * m + [k1] * (p - m)))
    Y2 = rho(*([l2] * m + [k2] * (p - m)))
    return {
        "X": X, "Y1": Y1, "Y2": Y2, "k1": k1, "k2": k2, "l1": l1, "l2": l2,
        "cover": stack_to_cover(X, Y1, Y2),
        "Y1_rotated": shift(Y1, "rows-left", m), "Y2_rotated": shift(Y2, "rows-left", m),
    }


def area_doubling(k: int, l: int, m: int, p: int) -> dict:
    """Matrices used when the area of ``X = rho(k^m, l^(p-m))`` is small.

    For ``m < p/2``: ``Y = rho(l^m, k^m, l^(p-2m))``,
    ``Z = rho((p-k-l)^(2m), (p-2l)^(p-2m))``; ``Y`` rows-left by ``m`` is
    ``X`` and ``Z`` rows-left by ``2m`` is an almost rectangle.
    For ``m > p/2``: ``Y = rho(l^(p-m), k^m)``,
    ``Z = rho((p-k-l)^(p-m), (p-2k)^(2m-p), (p-k-l)^(p-m))``; ``Y`` rows-left
    by ``p-m`` is ``X`` and ``Z`` rows-left by ``m`` is an almost rectangle.
    ``cover`` stacks ``X, Y, Z`` with :func:`stack_to_cover`.
    """
    X = rho(*([k] * m + [l] * (p - m)))
    if 2 * m < p:
        Y = rho(*([l] * m + [k] * m + [l] * (p - 2 * m)))
        Z = rho(*([p - k - l] * (2 * m) + [p - 2 * l] * (p - 2 * m)))
        y_shift, z_shift = m, 2 * m
    else:
        Y = rho(*([l] * (p - m) + [k] * m))
        Z = rho(*([p - k - l] * (p - m) + [p - 2 * k] * (2 * m - p) + [p - k - l] * (p - m)))
        y_shift, z_shift = p - m, m
    return {
        "X": X, "Y": Y, "Z": Z,
        "cover": stack_to_cover(X, Y, Z),
        "Y_rotated": shift(Y, "rows-left", y_shift),
        "Z_rotated": shift(Z, "rows-left", z_shift),
    }


# -- g-equivalence and tameness ----------------------------------------------

def g_equivalent(X, Y, s: BlackBoxOperation, g=None) -> bool:
    gm = _as_map(g)
    return gm(eval_t(s, X)) == gm(eval_t(s, Y))


@dataclass(frozen=True)
class TameVerdict:
    tame: bool
    side: str          # "below" or "above" one third
    area: Fraction

    def __bool__(self):
        return self.tame


def is_tame(X, s: BlackBoxOperation, g=None) -> TameVerdict:
    """Compare ``X`` with the zero matrix (area below 1/3) or the ones matrix."""
    M = as_matrix(X)
    lam = area(M)
    if lam == ONE_THIRD:
        raise ValueError("area is exactly 1/3; tameness is undefined")
    p = M.shape[0]
    if lam < ONE_THIRD:
        return TameVerdict(g_equivalent(M, zeros(p), s, g), "below", lam)
    return TameVerdict(g_equivalent(M, ones(p), s, g), "above", lam)


def untame_lines(s: BlackBoxOperation, g=None) -> list[int]:
    """Indices ``i`` for which ``tau(i)`` is not tame under ``(s, g)``.

    Lines of area exactly 1/3 (possible only for ``p = 3``) are skipped.
    """
    p = s.arity
    return [i for i in range(p * p + 1)
            if 3 * i != p * p and not is_tame(tau(i, p), s, g)]


@dataclass(frozen=True)
class CoverLemmaVerdict:
    passed: bool
    t_values: tuple
    g_values: tuple
    diagnostic: str = ""

    def __bool__(self):
        return self.passed


def check_cover_lemma(X, Y, Z, s: BlackBoxOperation, g=None,
                      template: RelationalStructure | None = None,
                      relation: str | None = None) -> CoverLemmaVerdict:
    """For a cover ``X, Y, Z`` the values ``g(t(.))`` must not all agree.

    A failure can only come from a broken precondition; the diagnostic
    names it (``s`` not preserving the relation, or ``g`` not being a
    homomorphism to NAE).
    """
    if not is_cover(X, Y, Z):
        raise NotACover("X, Y, Z is not a cover")
    C = template or builtin_template("one-in-three")
    rel = relation or next(r for r, k in C.signature.items() if k == 3)
    R = C.relation(rel)
    gm = _as_map(g)
    ts = tuple(eval_t(s, M) for M in (X, Y, Z))
    gs = tuple(gm(t) for t in ts)
    if len(set(gs)) > 1:
        return CoverLemmaVerdict(True, ts, gs)
    reasons = []
    if not set(ONE_IN_THREE_TUPLES) <= R:
        reasons.append(f"relation {rel} does not contain the 1-in-3 tuples")
    if s.table is not None and not is_polymorphism(s.table, C):
        reasons.append("s is not a polymorphism of the template")
    if ts not in R:
        reasons.append(f"(t(X), t(Y), t(Z)) = {ts} is not in {rel}: s does not preserve it")
    nae = builtin_template("nae")
    gmap = {a: gm(a) for a in C.domain}
    if C.signature == nae.signature and not is_homomorphism(gmap, C, nae):
        reasons.append("g is not a homomorphism to NAE")
    elif ts in R:
        reasons.append(f"g maps the {rel}-tuple {ts} to a constant: g is not a homomorphism to NAE")
    return CoverLemmaVerdict(False, ts, gs, "; ".join(reasons))


# -- the final construction --------------------------------------------------

@dataclass
class RefutationReport:
    p: int
    c_size: int
    m: int
    q: int
    interval: tuple[Fraction, Fraction]
    scanned: dict
    l1: int
    l2: int
    k: int
    area_X1: Fraction
    area_X2: Fraction
    area_X1_next_k: Fraction
    t_X1: int
    t_X2: int
    t_zero: int
    t_one: int
    step_X1: int | None
    step_X2: int | None
    checks: dict
    tame_X1: bool
    tame_X2: bool
    zeros_ones_separated: bool
    X1: np.ndarray = field(repr=False)
    X2: np.ndarray = field(repr=False)

    @property
    def verdict(self) -> str:
        if not self.zeros_ones_separated:
            return "zero and one matrices are g-equivalent: s, g break the cover condition"
        missing = [name for name, ok in (("X1", self.tame_X1), ("X2", self.tame_X2)) if not ok]
        if missing:
            return "tameness fails for " + " and ".join(missing) + \
                "; the construction shows (s, g) cannot make every almost rectangle tame"
        return "all hypotheses hold together with t(X1) = t(X2): contradiction"

    def to_text(self) -> str:
        rows = [
            ("p", self.p), ("c_size", self.c_size), ("m", self.m), ("q", self.q),
            ("interval", f"({self.interval[0]}, {self.interval[1]})"),
            ("l1", self.l1), ("l2", self.l2), ("k", self.k),
            ("area_X1", self.area_X1), ("area_X2", self.area_X2),
            ("area_X1_next_k", self.area_X1_next_k),
            ("t_X1", self.t_X1), ("t_X2", self.t_X2),
            ("t_zero", self.t_zero), ("t_one", self.t_one),
            ("step_X1", self.step_X1), ("step_X2", self.step_X2),
        ]
        rows += [(f"check.{k}", "pass" if v else "FAIL") for k, v in self.checks.items()]
        yn = {True: "yes", False: "no"}
        rows += [("tame_X1", yn[self.tame_X1]), ("tame_X2", yn[self.tame_X2]),
                 ("zeros_ones_separated", yn[self.zeros_ones_separated]),
                 ("verdict", self.verdict)]
        return "".join(f"{k} = {v}\n" for k, v in rows)


def refute_cyclic(s: BlackBoxOperation, c_size: int, g=None, relation: Callable | None = None,
                  allow_small_p: bool = False, bound_factor: int = 60,
                  step_factor: int = 5) -> RefutationReport:
    """Run the two-almost-rectangle construction against ``s``.

    Picks ``l1 < l2`` in ``(p/3 - 2c, p/3)`` with equal ``s``-values on
    columns of ``l`` leading ones, the largest ``k`` keeping
    ``rho(k^m, l1^(p-m))`` below area 1/3, and reports the resulting
    ``X1``, ``X2`` (equal ``t``-values, areas on both sides of 1/3).
    ``relation`` is an optional membership test ``(a, b, c) -> bool`` used to
    confirm that the 1-in-3 tuples belong to the template relation.
    """
    p = s.arity
    if not is_prime(p):
        raise ValueError(f"arity {p} is not prime")
    if p <= bound_factor * c_size and not allow_small_p:
        raise BoundViolation(f"p = {p} must exceed {bound_factor} * |C| = {bound_factor * c_size}")
    gm = _as_map(g)
    m = (p - 1) // 2
    q = (p * p - 1) // 3
    lo, hi = Fraction(p, 3) - 2 * c_size, Fraction(p, 3)

    def column(l):
        return [1] * l + [0] * (p - l)

    scanned = {}
    first_seen = {}
    l1 = l2 = None
    for l in range(max(0, int(lo) + 1), p + 1):
        if not (lo < l < hi):
            if l >= hi:
                break
            continue
        v = s(column(l))
        scanned[l] = v
        if v in first_seen:
            l1, l2 = first_seen[v], l
            break
        first_seen[v] = l
    if l1 is None:
        raise PigeonholeFailure(
            f"s takes {len(set(scanned.values()))} distinct values on {len(scanned)} columns; "
            f"more than |C| = {c_size} is impossible for an operation on |C| elements")

    def lam(k, l):
        return Fraction(m * k + (p - m) * l, p * p)

    k = max(kk for kk in range(p + 1) if lam(kk, l1) < ONE_THIRD)
    X1 = rho(*([k] * m + [l1] * (p - m)))
    X2 = rho(*([k] * m + [l2] * (p - m)))
    t1, t2 = eval_t(s, X1), eval_t(s, X2)
    t0, t_1 = eval_t(s, zeros(p)), eval_t(s, ones(p))
    a1, a2 = area(X1), area(X2)
    a_next = lam(k + 1, l1) if k < p else None
    n_int = sum(1 for l in range(p + 1) if lo < l < hi)
    checks = {
        "interval_positive": lo > 0,
        "interval_has_more_than_c": n_int > c_size,
        "pigeonhole_found": True,
        "l_in_interval": lo < l1 < l2 < hi,
        "s_columns_equal": scanned[l1] == scanned[l2],
        "t_equal": t1 == t2,
        "area_straddle": a1 < ONE_THIRD < a2,
        "k_maximal": a_next is not None and a_next > ONE_THIRD,
        "chain_inequality": l1 < l2 <= k < Fraction(p, 3) + 3 * c_size <= l1 + 5 * c_size,
        "almost_rectangle_X1": is_almost_rectangle(X1, c_size, step_factor),
        "almost_rectangle_X2": is_almost_rectangle(X2, c_size, step_factor),
        "area_never_one_third": a1 != ONE_THIRD and a2 != ONE_THIRD,
    }
    if relation is not None:
        checks["relation_contains_one_in_three"] = all(relation(t) for t in ONE_IN_THREE_TUPLES)
    g1, g2 = gm(t1), gm(t2)
    g0, g_1 = gm(t0), gm(t_1)
    return RefutationReport(
        p=p, c_size=c_size, m=m, q=q, interval=(lo, hi), scanned=scanned,
        l1=l1, l2=l2, k=k, area_X1=a1, area_X2=a2, area_X1_next_k=a_next,
        t_X1=t1, t_X2=t2, t_zero=t0, t_one=t_1,
        step_X1=step_size(X1), step_X2=step_size(X2), checks=checks,
        tame_X1=(g1 == g0), tame_X2=(g2 == g_1), zeros_ones_separated=(g0 != g_1),
        X1=X1, X2=X2,
    )


def random_cyclic_table(p: int, d: int = 2, rng: random.Random | None = None) -> OperationTable:
    """Uniformly random cyclic operation: one random value per rotation orbit."""
    from .polymorphisms import canonical_rotation
    import itertools

    rng = rng or random.Random(0)
    orbit_value: dict = {}
    vals = []
    for args in itertools.product(range(d), repeat=p):
        rep = canonical_rotation(args)
        if rep not in orbit_value:
            orbit_value[rep] = rng.randrange(d)
        vals.append(orbit_value[rep])
    return OperationTable(p, d, vals)


def format_matrix(X) -> str:
    M = as_matrix(X)
    return f"{M.shape[0]}\n" + "".join(" ".join(map(str, row)) + "\n" for row in M.tolist())


def parse_matrix(text: str) -> np.ndarray:
    from .errors import ParseError

    lines = [(n, ln.split("#", 1)[0].split()) for n, ln in enumerate(text.splitlines(), 1)]
    lines = [(n, toks) for n, toks in lines if toks]
    if not lines:
        raise ParseError("empty matrix file")
    n0, head = lines[0]
    if len(head) != 1 or not head[0].isdigit():
        raise ParseError("first line must hold the side length p", n0, 1)
    p = int(head[0])
    rows = lines[1:]
    if len(rows) != p:
        raise ParseError(f"expected {p} rows, found {len(rows)}", rows[-1][0] if rows else n0)
    out = []
    for n, toks in rows:
        if len(toks) != p:
            raise ParseError(f"expected {p} entries, found {len(toks)}", n)
        try:
            out.append([int(x) for x in toks])
        except ValueError:
            raise ParseError("entries must be integers", n) from None
    return as_matrix(out)
