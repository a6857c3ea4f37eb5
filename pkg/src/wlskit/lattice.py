"""Sublattices of Z^n in Hermite normal form.

A subgroup of ``Z^n / R`` is stored as the lattice ``L`` with
``R <= L <= Z^n``; every subgroup operation below becomes a lattice
operation.  The HNF basis is canonical, so two lattices are equal exactly
when their bases are.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Sequence

from . import kernels
from .matrix import IntMatrix, InvalidInput


class Lattice:
    __slots__ = ("n", "basis", "pivots", "_hash")

    def __init__(self, n: int, generators: Iterable[Sequence[int]] = (), *, _basis=None):
        self.n = n
        if _basis is None:
            gens = [list(g) for g in generators]
            for g in gens:
                if len(g) != n:
                    raise InvalidInput(f"generator of length {len(g)} in Z^{n}")
            gens = [g for g in gens if any(g)]
            basis, _ = kernels.echelon(gens, n) if gens else ([], None)
        else:
            basis = _basis
        self.basis = tuple(tuple(b) for b in basis)
        self.pivots = tuple(next(j for j, x in enumerate(b) if x) for b in self.basis)
        self._hash = None

    @classmethod
    def whole(cls, n: int) -> "Lattice":
        return cls(n, _basis=[[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "Lattice":
        return cls(n, _basis=[])

    @classmethod
    def from_columns(cls, M: IntMatrix) -> "Lattice":
        return cls(M.rows, M.columns())

    def __repr__(self) -> str:
        return f"Lattice(n={self.n}, basis={[list(b) for b in self.basis]})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Lattice) and self.n == other.n and self.basis == other.basis

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.basis))
        return self._hash

    @property
    def rank(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> IntMatrix:
        """Basis vectors as the columns of an ``n x rank`` matrix."""
        return IntMatrix.from_columns(self.basis, self.n)

    def coords(self, v: Sequence[int]) -> tuple[int, ...] | None:
        """Integer coordinates of ``v`` in the HNF basis, or ``None`` if ``v`` is not in the lattice."""
        res = list(v)
        if len(res) != self.n:
            raise InvalidInput(f"vector of length {len(res)} in Z^{self.n}")
        out = []
        for b, p in zip(self.basis, self.pivots):
            for j in range(p):
                if res[j]:
                    return None
            c, rem = divmod(res[p], b[p])
            if rem:
                return None
            if c:
                for j in range(p, self.n):
                    res[j] -= c * b[j]
            out.append(c)
        if any(res):
            return None
        return tuple(out)

    def __contains__(self, v: Sequence[int]) -> bool:
        return self.coords(v) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(b in self for b in other.basis)

    def __le__(self, other: "Lattice") -> bool:
        return other.contains_lattice(self)

    def __add__(self, other: "Lattice") -> "Lattice":
        self._check(other)
        return Lattice(self.n, list(self.basis) + list(other.basis))

    def scaled(self, c: int) -> "Lattice":
        return Lattice(self.n, [[c * x for x in b] for b in self.basis])

    def _check(self, other: "Lattice") -> None:
        if self.n != other.n:
            raise InvalidInput(f"lattices in Z^{self.n} and Z^{other.n}")

    def intersect(self, other: "Lattice") -> "Lattice":
        self._check(other)
        a, b = list(self.basis), list(other.basis)
        if not a or not b:
            return Lattice.zero(self.n)
        H, T = kernels.echelon(a + b, self.n, transform=True)
        # left-kernel rows (s, t) with s.A + t.B = 0 give s.A in both lattices
        r = len(H)
        gens = []
        for row in T[r:]:
            s = row[: len(a)]
            gens.append([sum(s[i] * a[i][j] for i in range(len(a))) for j in range(self.n)])
        return Lattice(self.n, gens)

    def image(self, F: IntMatrix) -> "Lattice":
        if F.cols != self.n:
            raise InvalidInput(f"map with {F.cols} columns applied to Z^{self.n}")
        return Lattice(F.rows, [F.apply(b) for b in self.basis])

    @staticmethod
    def preimage(F: IntMatrix, target: "Lattice") -> "Lattice":
        """``{x in Z^n : F x in target}`` for ``F: Z^n -> Z^m``."""
        if F.rows != target.n:
            raise InvalidInput(f"map into Z^{F.rows} with target lattice in Z^{target.n}")
        n = F.cols
        if n == 0:
            return Lattice.zero(0)
        cols = F.columns()
        rows = [list(c) for c in cols] + [list(b) for b in target.basis]
        H, T = kernels.echelon(rows, F.rows, transform=True)
        return Lattice(n, [row[:n] for row in T[len(H):]])

    def index_in(self, other: "Lattice") -> int | None:
        """``[other : self]`` when ``self <= other`` and the index is finite, else ``None``."""
        if self.rank != other.rank or not other.contains_lattice(self):
            return None
        det = 1
        # both are HNF with the same pivots when the index is finite
        for b, c, p in zip(self.basis, other.basis, self.pivots):
            det *= b[p] // c[p]
        return det

    def content(self) -> int:
        """gcd of all basis entries (0 for the zero lattice)."""
        g = 0
        for b in self.basis:
            for x in b:
                g = gcd(g, x)
        return g
