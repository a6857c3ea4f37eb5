"""Finite order, quasi-unipotence and roots of integer matrices.

Polynomials are coefficient lists from the leading coefficient down, so
``[1, 0, 1]`` is ``x^2 + 1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Sequence

from .abelian import Morphism, lattice_part
from .matrix import IntMatrix, InvalidInput, rank_q


class BudgetExceeded(RuntimeError):
    """A bounded search ran out of its node budget before deciding."""

    def __init__(self, explored: int, budget: int):
        super().__init__(f"search budget of {budget} nodes exhausted")
        self.explored = explored
        self.budget = budget


@dataclass(frozen=True)
class OrderResult:
    finite: bool
    order: int | None = None
    # non-cyclotomic part of the characteristic polynomial, or a vector moved by A^e
    witness: tuple | None = None
    witness_kind: str | None = None
    exponent_bound: int | None = None

    def as_dict(self) -> dict:
        out = {"finite": self.finite}
        if self.finite:
            out["order"] = self.order
        else:
            out["witness"] = list(self.witness) if self.witness is not None else None
            out["witness_kind"] = self.witness_kind
        if self.exponent_bound is not None:
            out["exponent_bound"] = self.exponent_bound
        return out


# ---------------------------------------------------------------- polynomials

def poly_divmod(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    """Division by a monic integer polynomial."""
    if not b or b[0] != 1:
        raise ValueError("divisor must be monic")
    a = list(a)
    if len(a) < len(b):
        return [0], a
    q = []
    for i in range(len(a) - len(b) + 1):
        c = a[i]
        q.append(c)
        if c:
            for j in range(1, len(b)):
                a[i + j] -= c * b[j]
    rem = a[len(a) - len(b) + 1:]
    return q, rem


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_eval(a: Sequence[int], x: int) -> int:
    v = 0
    for c in a:
        v = v * x + c
    return v


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


_CYCLOTOMIC: dict[int, list[int]] = {}


def cyclotomic(d: int) -> list[int]:
    """``Phi_d`` from ``x^d - 1 = prod_{e | d} Phi_e``."""
    if d not in _CYCLOTOMIC:
        num = [1] + [0] * (d - 1) + [-1]
        for e in range(1, d):
            if d % e == 0:
                num, rem = poly_divmod(num, cyclotomic(e))
                assert not any(rem)
        _CYCLOTOMIC[d] = num
    return _CYCLOTOMIC[d]


def cyclotomic_orders(m: int) -> list[int]:
    """All ``d`` with ``phi(d) <= m`` (``phi(d) >= sqrt(d / 2)`` bounds the scan)."""
    return [d for d in range(1, 2 * m * m + 3) if euler_phi(d) <= m]


def char_poly(A: IntMatrix) -> list[int]:
    """``det(x I - A)`` by the Faddeev-LeVerrier recursion with exact division."""
    if not A.is_square:
        raise InvalidInput(f"characteristic polynomial of a non-square {A.rows}x{A.cols} matrix")
    n = A.rows
    coeffs = [1]
    M = IntMatrix.zeros(n, n)
    I = IntMatrix.identity(n)
    for k in range(1, n + 1):
        M = A @ M + I.scale(coeffs[-1])
        AM = A @ M
        tr = sum(AM[i, i] for i in range(n))
        c, rem = divmod(-tr, k)
        assert rem == 0
        coeffs.append(c)
    return coeffs


def cyclotomic_factorization(P: Sequence[int]) -> tuple[dict[int, int], list[int]]:
    """Multiplicities of ``Phi_d`` dividing ``P`` and the remaining cofactor."""
    m = len(P) - 1
    rest = list(P)
    mult: dict[int, int] = {}
    for d in cyclotomic_orders(max(m, 1)):
        phi = cyclotomic(d)
        while len(rest) >= len(phi):
            q, r = poly_divmod(rest, phi)
            if any(r):
                break
            rest = q
            mult[d] = mult.get(d, 0) + 1
    return mult, rest


# ---------------------------------------------------------------- order decisions

def _require_unimodular(A: IntMatrix) -> None:
    if not A.is_square:
        raise InvalidInput(f"matrix is {A.rows}x{A.cols}, not square")
    if abs(A.det()) != 1:
        raise InvalidInput("matrix is not in GL(m, Z): |det| != 1")


def is_quasi_unipotent(A: IntMatrix) -> tuple[int | None, list[int] | None]:
    """``(e, None)`` with ``A^e`` unipotent and ``e`` minimal, or ``(None, cofactor)``.

    The cofactor is what remains of the characteristic polynomial after
    dividing out all cyclotomic factors.
    """
    _require_unimodular(A)
    mult, rest = cyclotomic_factorization(char_poly(A))
    if len(rest) > 1:
        return None, rest
    e = 1
    for d in mult:
        e = lcm(e, d)
    return e, None


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def finite_order(A: IntMatrix) -> OrderResult:
    e0, cofactor = is_quasi_unipotent(A)
    if e0 is None:
        return OrderResult(False, witness=tuple(cofactor), witness_kind="non_cyclotomic_factor")
    I = IntMatrix.identity(A.rows)
    C = A**e0 - I
    if not C.is_zero():
        j = next(j for j in range(C.cols) if any(C.column(j)))
        return OrderResult(False, witness=tuple(int(i == j) for i in range(A.rows)), witness_kind="moved_vector", exponent_bound=e0)
    for d in _divisors(e0):
        if A**d == I:
            return OrderResult(True, order=d, exponent_bound=e0)
    raise AssertionError("A^e = I but no divisor of e works")


def order_by_iteration(A: IntMatrix, limit: int) -> int | None:
    """Smallest ``j <= limit`` with ``A^j = I``, else ``None``."""
    I = IntMatrix.identity(A.rows)
    P = A
    for j in range(1, limit + 1):
        if P == I:
            return j
        P = P @ A
    return None


# ---------------------------------------------------------------- binomial identities

def _is_unipotent(B: IntMatrix) -> bool:
    return char_poly(B) == [comb(B.rows, i) * (-1) ** i for i in range(B.rows + 1)]


def _frac_matmul(X, Y):
    n = len(X)
    return [[sum(X[i][k] * Y[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def verify_root_binomial(B: IntMatrix, s: int) -> dict:
    """Check the binomial expansions linking ``C = B^s - I`` and ``D = B - I``.

    Forward: ``C = sum_{j=1}^{m-1} binom(s, j) D^j``.  Backward: the
    triangular system for ``xi`` in ``D = sum_g xi_g C^g`` is solved over Q
    and the expansion is checked; kernels of ``C^i`` and ``D^i`` have equal
    ranks for every ``i``.
    """
    if not B.is_square:
        raise InvalidInput("B must be square")
    if s < 1:
        raise InvalidInput("s must be at least 1")
    if not _is_unipotent(B):
        raise InvalidInput("B is not unipotent")
    m = B.rows
    I = IntMatrix.identity(m)
    D = B - I
    C = B**s - I
    forward = IntMatrix.zeros(m, m)
    Dj = I
    for j in range(1, m):
        Dj = Dj @ D
        forward = forward + Dj.scale(comb(s, j))
    forward_ok = forward == C

    # P(t) = (1 + t)^s - 1 truncated mod t^m; C = P(D)
    P = [comb(s, j) if 1 <= j < m else 0 for j in range(m)]
    powers = [[1] + [0] * (m - 1)]
    for _ in range(1, m):
        prev = powers[-1]
        nxt = [0] * m
        for a, x in enumerate(prev):
            if x:
                for b, y in enumerate(P):
                    if y and a + b < m:
                        nxt[a + b] += x * y
        powers.append(nxt)
    # sum_g xi_g [t^h] P^g = [h == 1] for h = 1..m-1, triangular with diagonal s^g
    xi = [Fraction(0)] * m
    for h in range(1, m):
        acc = Fraction(int(h == 1)) - sum(xi[g] * powers[g][h] for g in range(1, h))
        xi[h] = acc / powers[h][h]
    recon = [[Fraction(0)] * m for _ in range(m)]
    Cg = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
    Cf = [[Fraction(x) for x in row] for row in C.entries]
    for g in range(1, m):
        Cg = _frac_matmul(Cg, Cf)
        recon = [[recon[i][j] + xi[g] * Cg[i][j] for j in range(m)] for i in range(m)]
    backward_ok = recon == [[Fraction(x) for x in row] for row in D.entries]

    kernel_ok = True
    Ci, Di = I, I
    for i in range(1, m + 1):
        Ci, Di = Ci @ C, Di @ D
        if rank_q(Ci.entries, m) != rank_q(Di.entries, m):
            kernel_ok = False
    return {
        "s": s,
        "C": C.tolist(),
        "D": D.tolist(),
        "forward": forward_ok,
        "xi": [str(x) for x in xi[1:]],
        "backward": backward_ok,
        "kernel_ranks_equal": kernel_ok,
        "holds": forward_ok and backward_ok and kernel_ok,
    }


# ---------------------------------------------------------------- root search

def find_root_bruteforce(A: IntMatrix, r: int, entry_bound: int, budget: int = 10_000_000) -> IntMatrix | None:
    """First ``B`` (lexicographic in row-major entries from ``-bound``) with ``B^r = A``.

    Each candidate matrix counts as one node; exceeding ``budget`` raises
    :class:`BudgetExceeded`.  Returns ``None`` only when the whole box was
    searched.
    """
    _require_unimodular(A)
    if r < 1:
        raise InvalidInput("r must be positive")
    if entry_bound < 0:
        raise InvalidInput("entry bound must be nonnegative")
    m = A.rows
    values = range(-entry_bound, entry_bound + 1)
    explored = 0
    for entries in itertools.product(values, repeat=m * m):
        explored += 1
        if explored > budget:
            raise BudgetExceeded(explored - 1, budget)
        B = IntMatrix(m, m, [entries[i * m:(i + 1) * m] for i in range(m)])
        if abs(B.det()) != 1:
            continue
        if B**r == A:
            return B
    return None


@dataclass
class RootTable:
    """Powers ``B^r`` of every ``B`` in ``GL(m, Z)`` with entries bounded by ``bound``.

    Lookups return the lexicographically first root, matching
    :func:`find_root_bruteforce`.
    """

    m: int
    bound: int
    max_r: int
    table: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        m = self.m
        values = range(-self.bound, self.bound + 1)
        for entries in itertools.product(values, repeat=m * m):
            B = IntMatrix(m, m, [entries[i * m:(i + 1) * m] for i in range(m)])
            if abs(B.det()) != 1:
                continue
            P = B
            for r in range(2, self.max_r + 1):
                P = P @ B
                self.table.setdefault((r, P), B)

    def root(self, A: IntMatrix, r: int) -> IntMatrix | None:
        if r == 1:
            return A if max(abs(x) for row in A.entries for x in row) <= self.bound else None
        if not 2 <= r <= self.max_r:
            raise InvalidInput(f"r outside 1..{self.max_r}")
        return self.table.get((r, A))


def root_census(matrix_bound: int = 2, root_bound: int = 4, r_values: Sequence[int] = range(2, 13)) -> dict:
    """For each infinite-order ``A`` in ``GL(2, Z)`` with entries in the box, the exponents ``r`` admitting a root."""
    table = RootTable(2, root_bound, max(r_values))
    values = range(-matrix_bound, matrix_bound + 1)
    per_matrix = {}
    for entries in itertools.product(values, repeat=4):
        A = IntMatrix(2, 2, [entries[:2], entries[2:]])
        if abs(A.det()) != 1 or finite_order(A).finite:
            continue
        per_matrix[entries] = [r for r in r_values if table.root(A, r) is not None]
    most = max((len(v) for v in per_matrix.values()), default=0)
    return {"matrices": len(per_matrix), "max_root_exponents": most, "per_matrix": per_matrix}


def order_census(bound: int = 3, m: int = 2) -> dict[int, int]:
    """Count of matrices in ``GL(m, Z)`` with entries in ``[-bound, bound]`` per finite order (0 = infinite)."""
    counts: dict[int, int] = {}
    values = range(-bound, bound + 1)
    for entries in itertools.product(values, repeat=m * m):
        A = IntMatrix(m, m, [entries[i * m:(i + 1) * m] for i in range(m)])
        if abs(A.det()) != 1:
            continue
        res = finite_order(A)
        key = res.order if res.finite else 0
        counts[key] = counts.get(key, 0) + 1
    return dict(sorted(counts.items()))


# ---------------------------------------------------------------- automorphisms

def _reduced_action(f: Morphism) -> tuple[IntMatrix, list[int]]:
    """Matrix of ``f`` in nontrivial Smith coordinates, torsion rows reduced."""
    G = f.source
    keep = [i for i, d in enumerate(G.diag) if d != 1]
    M = (G.U @ f.matrix @ G.U_inv).submatrix(keep, keep)
    mods = [G.diag[i] for i in keep]
    return _reduce_rows(M, mods), mods


def _reduce_rows(M: IntMatrix, mods: Sequence[int]) -> IntMatrix:
    return IntMatrix(M.rows, M.cols, [[x % d if d else x for x in row] for row, d in zip(M.entries, mods)])


def _power_mod(M: IntMatrix, e: int, mods: Sequence[int]) -> IntMatrix:
    result = IntMatrix.identity(M.rows)
    base = M
    while e:
        if e & 1:
            result = _reduce_rows(result @ base, mods)
        e >>= 1
        if e:
            base = _reduce_rows(base @ base, mods)
    return result


def automorphism_order(f: Morphism) -> OrderResult:
    """Order of an automorphism of a finitely generated abelian group.

    The order, when finite, divides ``h * e * t`` with ``h = |Tor G|``,
    ``e`` the order of the induced map on ``G / Tor``, and ``t`` the order
    of the restriction to ``Tor G``; the minimal order is found among the
    divisors of that bound.
    """
    G = f.source
    if not f.target.same_as(G):
        raise InvalidInput("automorphism must map a group to itself")
    if not (f.is_injective() and f.is_surjective()):
        raise InvalidInput("morphism is not invertible")
    free = lattice_part(f)
    if G.rank:
        res = finite_order(free.matrix)
        if not res.finite:
            return res
        e = res.order
    else:
        e = 1
    M, mods = _reduced_action(f)
    I = IntMatrix.identity(M.rows)
    tors = [i for i, d in enumerate(mods) if d]
    t = 1
    for i in tors:
        v = [int(j == i) for j in range(M.rows)]
        w = v
        period = 0
        while True:
            w = [x % d if d else x for x, d in zip(M.apply(w), mods)]
            period += 1
            if w == v:
                break
        t = lcm(t, period)
    h = math.prod(G.torsion)
    bound = h * e * t
    if _power_mod(M, bound, mods) != I:
        raise AssertionError("automorphism does not satisfy the order bound")
    for d in _divisors(bound):
        if _power_mod(M, d, mods) == I:
            return OrderResult(True, order=d, exponent_bound=bound)
    raise AssertionError("unreachable")


def automorphism_order_by_iteration(f: Morphism, limit: int = 10_000) -> int | None:
    """Smallest ``j <= limit`` with ``f^j`` fixing every generator modulo relations."""
    G = f.source
    gens = [tuple(int(i == j) for i in range(G.generators)) for j in range(G.generators)]
    cur = [G.reduce(g) for g in gens]
    target = list(cur)
    Ui = G.U_inv
    for j in range(1, limit + 1):
        cur = [G.reduce(f(Ui.apply(y))) for y in cur]
        if cur == target:
            return j
    return None
