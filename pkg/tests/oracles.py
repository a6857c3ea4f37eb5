"""Independent reference computations used by the tests.

Nothing here calls into wlskit's reduction kernels: normal forms come
from sympy, finite groups are enumerated element by element, and matrix
orders come from repeated multiplication.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import hermite_normal_form, invariant_factors


def sympy_invariants(rows: list[list[int]], nrows: int, ncols: int) -> list[int]:
    """Nonzero invariant factors of a matrix, in divisibility order."""
    if nrows == 0 or ncols == 0:
        return []
    return [abs(int(x)) for x in invariant_factors(Matrix(nrows, ncols, [x for r in rows for x in r]), domain=ZZ) if x]


def sympy_rank(rows: list[list[int]], nrows: int, ncols: int) -> int:
    if nrows == 0 or ncols == 0:
        return 0
    return Matrix(nrows, ncols, [x for r in rows for x in r]).rank()


class FiniteGroup:
    """``Z^n / L`` for a full-rank lattice ``L`` given by generator columns.

    Elements are the vectors of the box ``prod [0, h_i)`` read off the
    column Hermite form of ``L``.
    """

    def __init__(self, n: int, columns: list[list[int]]):
        self.n = n
        M = Matrix(n, len(columns), [columns[j][i] for i in range(n) for j in range(len(columns))])
        H = hermite_normal_form(M)
        if H.cols != n:
            raise ValueError("relation lattice is not of full rank")
        self.H = [[int(H[i, j]) for j in range(n)] for i in range(n)]

    def reduce(self, v) -> tuple[int, ...]:
        x = list(v)
        for i in range(self.n - 1, -1, -1):
            h = self.H[i][i]
            q = x[i] // h
            if q:
                for r in range(self.n):
                    x[r] -= q * self.H[r][i]
        return tuple(x)

    def elements(self):
        return itertools.product(*[range(self.H[i][i]) for i in range(self.n)])

    @property
    def order(self) -> int:
        out = 1
        for i in range(self.n):
            out *= self.H[i][i]
        return out

    def is_zero(self, v) -> bool:
        return not any(self.reduce(v))

    def element_order(self, v) -> int:
        m = 1
        while not self.is_zero([m * x for x in v]):
            m += 1
        return m

    def exponent(self) -> int:
        e = 1
        for x in self.elements():
            o = self.element_order(x)
            e = e * o // gcd(e, o)
        return e

    def killed_by(self, k: int) -> int:
        """Number of elements ``x`` with ``k x = 0``."""
        return sum(1 for x in self.elements() if self.is_zero([k * y for y in x]))


def killed_by_invariants(torsion, k: int) -> int:
    out = 1
    for d in torsion:
        out *= gcd(k, d)
    return out


def power_iteration_order(rows: list[list[int]], limit: int) -> int | None:
    """Smallest ``j <= limit`` with ``A^j = I``, by repeated multiplication."""
    n = len(rows)
    ident = [[int(i == j) for j in range(n)] for i in range(n)]
    P = [r[:] for r in rows]
    for j in range(1, limit + 1):
        if P == ident:
            return j
        P = [[sum(P[i][t] * rows[t][c] for t in range(n)) for c in range(n)] for i in range(n)]
    return None


def rational_inverse(rows: list[list[int]]) -> list[list[Fraction]]:
    M = Matrix(rows).inv()
    return [[Fraction(int(M[i, j].p), int(M[i, j].q)) for j in range(M.cols)] for i in range(M.rows)]


def sympy_charpoly(rows: list[list[int]]) -> list[int]:
    from sympy import symbols

    x = symbols("x")
    return [int(c) for c in Matrix(rows).charpoly(x).all_coeffs()]
