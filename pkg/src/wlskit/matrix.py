"""Exact integer matrices and rational linear algebra.

Everything here is exact: integers are Python ints and rationals are
:class:`fractions.Fraction`.  No floating point is used anywhere in the
package.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from . import kernels


class InvalidInput(ValueError):
    """Raised when an operation's precondition is violated by its input."""


class IntMatrix:
    """Immutable ``rows x cols`` matrix of arbitrary-precision integers.

    Zero-row and zero-column shapes are allowed, which is why ``rows`` and
    ``cols`` are stored explicitly instead of being read off ``entries``.
    """

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[Iterable[int]] | None = None):
        if rows < 0 or cols < 0:
            raise InvalidInput(f"negative shape {rows}x{cols}")
        if entries is None:
            ent = tuple((0,) * cols for _ in range(rows))
        else:
            ent = tuple(tuple(int(x) for x in r) for r in entries)
            if cols == 0 and rows > 0 and all(len(r) == 0 for r in ent) and len(ent) in (0, rows):
                ent = tuple(() for _ in range(rows))
            if len(ent) != rows or any(len(r) != cols for r in ent):
                raise InvalidInput(f"entries do not form a {rows}x{cols} array")
        self.rows = rows
        self.cols = cols
        self.entries = ent
        self._hash = None

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise InvalidInput("cannot infer column count of an empty row list")
            cols = len(rows[0])
        return cls(len(rows), cols, rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise InvalidInput(f"column of length {len(c)} in a {rows}-row matrix")
        return cls(rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        ent = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            ent[i][i] = v
        return cls(rows, cols, ent)

    def __repr__(self) -> str:
        return f"IntMatrix({self.rows}, {self.cols}, {[list(r) for r in self.entries]})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows, [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise InvalidInput(f"shape mismatch {self.shape} @ {other.shape}")
        return IntMatrix(self.rows, other.cols, matmul(self.entries, other.entries, other.cols))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise InvalidInput(f"shape mismatch {self.shape} + {other.shape}")
        return IntMatrix(self.rows, self.cols, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise InvalidInput(f"shape mismatch {self.shape} - {other.shape}")
        return IntMatrix(self.rows, self.cols, [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, [[c * x for x in r] for r in self.entries])

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise InvalidInput(f"vector of length {len(v)} for a matrix with {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise InvalidInput("hstack needs equal row counts")
        return IntMatrix(self.rows, self.cols + other.cols, [r + s for r, s in zip(self.entries, other.entries)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(rows), len(cols), [[self.entries[i][j] for j in cols] for i in rows])

    def __pow__(self, e: int) -> "IntMatrix":
        if not self.is_square():
            raise InvalidInput("power of a non-square matrix")
        if e < 0:
            raise InvalidInput("negative matrix power")
        result = IntMatrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square():
            raise InvalidInput("determinant of a non-square matrix")
        return bareiss_det(self.tolist())


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], bcols: int) -> list[list[int]]:
    bt = list(zip(*b)) if b else [()] * bcols
    if not bt:
        bt = [()] * bcols
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def bareiss_det(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * akk - a[i][k] * a[k][j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def smith_normal_form(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative
    entries ``d_1 | d_2 | ...`` (zeros last).
    """
    if M.rows == 0 or M.cols == 0:
        return IntMatrix.identity(M.rows), M, IntMatrix.identity(M.cols)
    U, D, V = kernels.smith(M.tolist(), M.rows, M.cols)
    return IntMatrix(M.rows, M.rows, U), IntMatrix(M.rows, M.cols, D), IntMatrix(M.cols, M.cols, V)


def diagonal_of(D: IntMatrix) -> list[int]:
    return [D.entries[i][i] for i in range(min(D.rows, D.cols))]


# ---------------------------------------------------------------- rationals

def _integral_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for r in rows:
        den = 1
        for x in r:
            if isinstance(x, Fraction) and x.denominator != 1:
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in r] if den != 1 else [int(x) for x in r])
    return out


def _primitive(row: list[int]) -> list[int]:
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    return [x // g for x in row] if g > 1 else row


def _echelon_q(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced echelon form over Q with each row scaled to a primitive integer row, pivot positive."""
    A = [r for r in _integral_rows(rows) if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(A):
            break
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        Ar = A[r]
        p = Ar[c]
        for i in range(len(A)):
            if i != r:
                f = A[i][c]
                if f:
                    A[i] = _primitive([p * x - f * y for x, y in zip(A[i], Ar)])
        pivots.append(c)
        r += 1
    out = []
    for row, c in zip(A[:r], pivots):
        row = _primitive(row)
        out.append(row if row[c] > 0 else [-x for x in row])
    return out, pivots


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns nonzero rows and pivot columns.

    Elimination runs fraction-free on primitive integer rows; rows are
    normalized to Fractions only at the end.
    """
    R, pivots = _echelon_q(rows, ncols)
    return [[Fraction(x, row[c]) for x in row] for row, c in zip(R, pivots)], pivots


def _nullspace_int(rows: Sequence[Sequence], ncols: int) -> list[list[int]]:
    R, pivots = _echelon_q(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        den = 1
        for row, pc in zip(R, pivots):
            if row[f]:
                den = lcm(den, row[pc])
        x = [0] * ncols
        x[f] = den
        for row, pc in zip(R, pivots):
            x[pc] = -row[f] * (den // row[pc])
        basis.append(x)
    return basis


def rank_q(rows: Sequence[Sequence], ncols: int) -> int:
    return len(rref(rows, ncols)[0])


def nullspace_q(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}`` for ``A`` given by ``rows``."""
    R, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def solve_q(rows: Sequence[Sequence], ncols: int, b: Sequence) -> list[Fraction] | None:
    """One solution of ``A x = b`` over Q, or ``None`` if inconsistent."""
    aug = [list(r) + [bi] for r, bi in zip(rows, b)]
    R, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return x


class QSubspace:
    """Subspace of ``Q^n`` stored by its reduced echelon basis.

    Basis rows are primitive integer vectors with positive pivots, which is
    still canonical, so ``==`` is equality of subspaces.
    """

    __slots__ = ("n", "basis", "pivots")

    def __init__(self, n: int, vectors: Iterable[Sequence] = ()):
        self.n = n
        vecs = [list(v) for v in vectors]
        for v in vecs:
            if len(v) != n:
                raise InvalidInput(f"vector of length {len(v)} in Q^{n}")
        basis, pivots = _echelon_q(vecs, n) if vecs else ([], [])
        self.basis = tuple(tuple(r) for r in basis)
        self.pivots = tuple(pivots)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, QSubspace) and self.n == other.n and self.basis == other.basis

    def __hash__(self):
        return hash((self.n, self.basis))

    def __add__(self, other: "QSubspace") -> "QSubspace":
        return QSubspace(self.n, list(self.basis) + list(other.basis))

    def contains(self, v: Sequence) -> bool:
        return QSubspace(self.n, list(self.basis) + [list(v)]).dim == self.dim

    def intersect(self, other: "QSubspace") -> "QSubspace":
        a, b = list(self.basis), list(other.basis)
        if not a or not b:
            return QSubspace(self.n)
        # x*A = y*B  <=>  (x, -y) in left kernel of [A; B]
        cols = [[a[i][j] for i in range(len(a))] + [b[i][j] for i in range(len(b))] for j in range(self.n)]
        ker = _nullspace_int(cols, len(a) + len(b))
        vecs = [[sum(k[i] * a[i][j] for i in range(len(a))) for j in range(self.n)] for k in ker]
        return QSubspace(self.n, vecs)

    def image(self, rows: Sequence[Sequence], m: int) -> "QSubspace":
        """Image under the linear map ``Q^n -> Q^m`` given by a matrix (list of rows)."""
        return QSubspace(m, [[sum(r[j] * v[j] for j in range(self.n)) for r in rows] for v in self.basis])

    @staticmethod
    def preimage(rows: Sequence[Sequence], n: int, target: "QSubspace") -> "QSubspace":
        """``{x in Q^n : F x in target}`` for ``F`` given by rows (``target.n`` of them)."""
        m = target.n
        tb = list(target.basis)
        # F x - sum y_i t_i = 0 over unknowns (x, y)
        sys_rows = [list(rows[i]) + [-t[i] for t in tb] for i in range(m)]
        ker = _nullspace_int(sys_rows, n + len(tb))
        return QSubspace(n, [k[:n] for k in ker])

    @staticmethod
    def whole(n: int) -> "QSubspace":
        return QSubspace(n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])
