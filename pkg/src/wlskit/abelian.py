"""Finitely generated abelian groups, morphisms, subgroups and exponents.

A group is presented as ``Z^n / R`` where the columns of the relation
matrix ``R`` are the relators.  Morphisms act on generator coordinates by
an integer matrix (images of generators are its columns).  Subgroups are
generator lists in ambient coordinates; internally every subgroup is the
lattice spanned by its generators together with the ambient relators.

Exponents are plain ints, with ``math.inf`` standing for an infinite
exponent (infinite cokernel).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .lattice import Lattice
from .matrix import IntMatrix, InvalidInput, diagonal_of, smith_normal_form

INF = math.inf

__all__ = [
    "INF",
    "Presentation",
    "Morphism",
    "Subgroup",
    "smith_normal_form",
    "canonicalize",
    "torsion_subgroup",
    "torsion_quotient",
    "lattice_part",
    "free_part_matrix",
    "exponent_group",
    "exponent_morphism",
    "subquotient",
    "subgroup_sum",
    "subgroup_intersection",
    "image",
    "preimage",
    "kernel",
    "quotient",
    "subgroups_equal",
    "verify_square_bounds",
    "gcd_claim_holds",
    "minkowski_bound",
    "subgroup_type_p",
    "is_prime",
]


def unimodular_inverse(U: IntMatrix) -> IntMatrix:
    n = U.rows
    A = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(U.entries)]
    for c in range(n):
        piv = next(i for i in range(c, n) if A[i][c] != 0)
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    out = []
    for r in A:
        row = r[n:]
        if any(x.denominator != 1 for x in row):
            raise InvalidInput("matrix is not unimodular")
        out.append([int(x) for x in row])
    return IntMatrix(n, n, out)


class Presentation:
    """The group ``Z^generators / (column span of relations)``.

    The Smith form of the relations is computed once at construction and
    gives canonical coordinates ``y = U x``: coordinate ``i`` is cyclic of
    order ``d_i`` (``d_i == 0`` means infinite cyclic).
    """

    def __init__(self, generators: int, relations: IntMatrix | Sequence[Sequence[int]] | None = None):
        if generators < 0:
            raise InvalidInput("negative number of generators")
        if relations is None:
            relations = IntMatrix(generators, 0)
        elif not isinstance(relations, IntMatrix):
            relations = IntMatrix.from_columns(relations, generators)
        if relations.rows != generators:
            raise InvalidInput(f"relation matrix has {relations.rows} rows for {generators} generators")
        self.generators = generators
        self.relations = relations
        U, D, _ = smith_normal_form(relations)
        diag = diagonal_of(D) + [0] * (generators - min(generators, relations.cols))
        self._U = U
        self.diag = tuple(diag)
        self.free_indices = tuple(i for i, d in enumerate(diag) if d == 0)
        self.torsion_indices = tuple(i for i, d in enumerate(diag) if d > 1)
        self.rank = len(self.free_indices)
        self.torsion = tuple(diag[i] for i in self.torsion_indices)

    @classmethod
    def free(cls, n: int) -> "Presentation":
        return cls(n)

    @classmethod
    def cyclic(cls, m: int) -> "Presentation":
        return cls(1, IntMatrix(1, 1, [[m]]))

    @classmethod
    def from_invariants(cls, rank: int, torsion: Sequence[int] = ()) -> "Presentation":
        """``Z^rank + Z/t_1 + ... `` with generators ordered torsion first."""
        n = rank + len(torsion)
        return cls(n, IntMatrix.diagonal(list(torsion), n, len(torsion)))

    def __repr__(self) -> str:
        return f"Presentation({self.generators}, {self.relations.tolist()})"

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion] + ["Z"] * self.rank
        return " + ".join(parts) if parts else "0"

    def same_as(self, other: "Presentation") -> bool:
        """Identical presentations (same generators, same relation lattice)."""
        return self.generators == other.generators and self.relation_lattice == other.relation_lattice

    @cached_property
    def U(self) -> IntMatrix:
        return self._U

    @cached_property
    def U_inv(self) -> IntMatrix:
        return unimodular_inverse(self._U)

    @cached_property
    def relation_lattice(self) -> Lattice:
        return Lattice.from_columns(self.relations)

    @property
    def canonical(self) -> tuple[int, tuple[int, ...]]:
        return self.rank, self.torsion

    @property
    def order(self) -> int | float:
        return INF if self.rank else math.prod(self.torsion)

    def is_finite(self) -> bool:
        return self.rank == 0

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of the class of ``v``: torsion parts reduced, trivial parts dropped."""
        y = self._U.apply(v)
        return tuple(0 if d == 1 else (yi % d if d else yi) for yi, d in zip(y, self.diag))

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def equal(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.is_zero([a - b for a, b in zip(u, v)])

    def element_order(self, v: Sequence[int]) -> int | float:
        y = self.reduce(v)
        o = 1
        for yi, d in zip(y, self.diag):
            if yi:
                if d == 0:
                    return INF
                o = o * (d // gcd(d, yi)) // gcd(o, d // gcd(d, yi))
        return o

    def torsion_generators(self) -> list[tuple[int, ...]]:
        """Ambient vectors generating the torsion subgroup (one per invariant factor)."""
        Ui = self.U_inv
        return [Ui.column(i) for i in self.torsion_indices]

    def free_generators(self) -> list[tuple[int, ...]]:
        Ui = self.U_inv
        return [Ui.column(i) for i in self.free_indices]


class Morphism:
    """Homomorphism ``source -> target``; column ``j`` of ``matrix`` is the image of generator ``j``."""

    def __init__(self, source: Presentation, target: Presentation, matrix: IntMatrix | Sequence[Sequence[int]], check: bool = True):
        if not isinstance(matrix, IntMatrix):
            matrix = IntMatrix(target.generators, source.generators, matrix)
        if matrix.shape != (target.generators, source.generators):
            raise InvalidInput(
                f"morphism matrix has shape {matrix.shape}, expected {(target.generators, source.generators)}"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            L = target.relation_lattice
            for j, col in enumerate(matrix.__matmul__(source.relations).columns()):
                if col not in L:
                    raise InvalidInput(f"morphism is not well defined: relator {j} of the source maps outside the target relations")

    def __repr__(self) -> str:
        return f"Morphism({self.source!r} -> {self.target!r}, {self.matrix.tolist()})"

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.apply(v)

    @classmethod
    def identity(cls, P: Presentation) -> "Morphism":
        return cls(P, P, IntMatrix.identity(P.generators), check=False)

    @classmethod
    def zero(cls, source: Presentation, target: Presentation) -> "Morphism":
        return cls(source, target, IntMatrix.zeros(target.generators, source.generators), check=False)

    def compose(self, other: "Morphism") -> "Morphism":
        """``self o other``."""
        if other.target.generators != self.source.generators:
            raise InvalidInput("composition of morphisms with mismatched groups")
        return Morphism(other.source, self.target, self.matrix @ other.matrix, check=False)

    def equals(self, other: "Morphism") -> bool:
        if self.source.generators != other.source.generators or self.target.generators != other.target.generators:
            return False
        return all(self.target.equal(a, b) for a, b in zip(self.matrix.columns(), other.matrix.columns()))

    def is_zero(self) -> bool:
        return all(self.target.is_zero(c) for c in self.matrix.columns())

    def image(self) -> "Subgroup":
        return Subgroup(self.target, self.matrix.columns())

    def kernel(self) -> "Subgroup":
        return kernel(self)

    def cokernel(self) -> Presentation:
        return Presentation(self.target.generators, self.target.relations.hstack(self.matrix))

    def is_injective(self) -> bool:
        return kernel(self).is_trivial()

    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


class Subgroup:
    """Subgroup of ``ambient`` generated by integer coordinate vectors."""

    def __init__(self, ambient: Presentation, generators: Iterable[Sequence[int]] = ()):
        gens = tuple(tuple(int(x) for x in g) for g in generators)
        for g in gens:
            if len(g) != ambient.generators:
                raise InvalidInput(f"subgroup generator of length {len(g)} in a group on {ambient.generators} generators")
        self.ambient = ambient
        self.generators = gens
        self.lattice = Lattice(ambient.generators, list(gens) + ambient.relations.columns())

    @classmethod
    def _from_lattice(cls, ambient: Presentation, L: Lattice) -> "Subgroup":
        S = cls.__new__(cls)
        S.ambient = ambient
        S.generators = tuple(b for b in L.basis if b not in ambient.relation_lattice)
        S.lattice = L
        return S

    @classmethod
    def whole(cls, P: Presentation) -> "Subgroup":
        return cls._from_lattice(P, Lattice.whole(P.generators))

    @classmethod
    def trivial(cls, P: Presentation) -> "Subgroup":
        return cls._from_lattice(P, P.relation_lattice)

    def __repr__(self) -> str:
        return f"Subgroup({[list(g) for g in self.generators]} in {self.ambient})"

    def __contains__(self, v: Sequence[int]) -> bool:
        return tuple(v) in self.lattice

    def contains(self, v: Sequence[int]) -> bool:
        return tuple(v) in self.lattice

    def _check(self, other: "Subgroup") -> None:
        if not self.ambient.same_as(other.ambient):
            raise InvalidInput("subgroups live in different ambient groups")

    def __le__(self, other: "Subgroup") -> bool:
        self._check(other)
        return other.lattice.contains_lattice(self.lattice)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return subgroups_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "Subgroup") -> "Subgroup":
        return subgroup_sum(self, other)

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return subgroup_intersection(self, other)

    def is_trivial(self) -> bool:
        return self.lattice == self.ambient.relation_lattice

    def as_presentation(self) -> Presentation:
        P, _ = subquotient(self.lattice, self.ambient.relation_lattice)
        return P

    def inclusion(self) -> Morphism:
        """The inclusion morphism from :meth:`as_presentation` into the ambient group."""
        P, B = subquotient(self.lattice, self.ambient.relation_lattice)
        return Morphism(P, self.ambient, B, check=False)

    def quotient(self) -> tuple[Presentation, Morphism]:
        return quotient(self)

    @property
    def canonical(self) -> tuple[int, tuple[int, ...]]:
        return self.as_presentation().canonical


def subquotient(numerator: Lattice, denominator: Lattice) -> tuple[Presentation, IntMatrix]:
    """Present ``numerator / denominator`` (requires ``denominator <= numerator``).

    Returns the presentation on the HNF basis of ``numerator`` together with
    that basis as the columns of a matrix, which is the map from the new
    generators back to ambient coordinates.
    """
    B = numerator.basis_matrix()
    cols = []
    for b in denominator.basis:
        c = numerator.coords(b)
        if c is None:
            raise InvalidInput("denominator lattice is not contained in numerator")
        cols.append(c)
    return Presentation(numerator.rank, IntMatrix.from_columns(cols, numerator.rank)), B


# ---------------------------------------------------------------- canonical forms

def canonicalize(P: Presentation) -> tuple[int, tuple[int, ...]]:
    """``(rank, torsion coefficients d_1 | d_2 | ...)`` of the presented group."""
    return P.canonical


def torsion_subgroup(P: Presentation) -> Subgroup:
    return Subgroup(P, P.torsion_generators())


def torsion_quotient(P: Presentation) -> Morphism:
    """Projection ``P -> P / Tor P`` onto the free group on the free Smith coordinates."""
    U = P.U
    M = U.submatrix(P.free_indices, range(P.generators))
    return Morphism(P, Presentation.free(P.rank), M, check=False)


def free_part_matrix(source: Presentation, target: Presentation, F: IntMatrix) -> IntMatrix:
    """Matrix of the induced map ``source/Tor -> target/Tor`` in free Smith coordinates.

    ``F`` must send torsion of ``source`` into torsion of ``target`` modulo
    relations, which holds for every morphism and, more generally, for any
    map whose rationalization is well defined.
    """
    M = target.U @ F @ source.U_inv
    return M.submatrix(target.free_indices, source.free_indices)


def lattice_part(f: Morphism) -> Morphism:
    """``f_Z : source/Tor -> target/Tor`` as a morphism of free groups."""
    M = free_part_matrix(f.source, f.target, f.matrix)
    return Morphism(Presentation.free(f.source.rank), Presentation.free(f.target.rank), M, check=False)


def exponent_group(P: Presentation) -> int | float:
    """Exponent (lcm of element orders); ``INF`` when the group is infinite."""
    if P.rank:
        return INF
    return P.torsion[-1] if P.torsion else 1


def exponent_morphism(f: Morphism) -> int | float:
    """Exponent of the cokernel of ``f``."""
    return exponent_group(f.cokernel())


# ---------------------------------------------------------------- subgroup operations

def subgroup_sum(A: Subgroup, B: Subgroup) -> Subgroup:
    A._check(B)
    return Subgroup._from_lattice(A.ambient, A.lattice + B.lattice)


def subgroup_intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    A._check(B)
    return Subgroup._from_lattice(A.ambient, A.lattice.intersect(B.lattice))


def image(f: Morphism, A: Subgroup | None = None) -> Subgroup:
    """``f(A)``; the whole image when ``A`` is omitted."""
    if A is None:
        return f.image()
    if not A.ambient.same_as(f.source):
        raise InvalidInput("subgroup is not in the source of the morphism")
    return Subgroup(f.target, [f(b) for b in A.lattice.basis])


def preimage(f: Morphism, B: Subgroup) -> Subgroup:
    if not B.ambient.same_as(f.target):
        raise InvalidInput("subgroup is not in the target of the morphism")
    return Subgroup._from_lattice(f.source, Lattice.preimage(f.matrix, B.lattice))


def kernel(f: Morphism) -> Subgroup:
    return Subgroup._from_lattice(f.source, Lattice.preimage(f.matrix, f.target.relation_lattice))


def quotient(A: Subgroup) -> tuple[Presentation, Morphism]:
    """``ambient / A`` on the ambient generators, plus the projection."""
    G = A.ambient
    Q = Presentation(G.generators, A.lattice.basis_matrix() if A.lattice.rank else IntMatrix(G.generators, 0))
    return Q, Morphism(G, Q, IntMatrix.identity(G.generators), check=False)


def subgroups_equal(A: Subgroup, B: Subgroup) -> bool:
    A._check(B)
    return A.lattice == B.lattice


# ---------------------------------------------------------------- exponent squares

def _require_free(*maps: Morphism) -> None:
    for f in maps:
        if f.source.relations.cols or f.target.relations.cols:
            raise InvalidInput("square bounds are stated for free groups; pass free presentations")


def _divisible(M: IntMatrix, c: int) -> bool:
    return all(x % c == 0 for r in M.entries for x in r)


def verify_square_bounds(f: Morphism, f_prime: Morphism, g: Morphism, h: Morphism, mode: int, scalar: int | None = None) -> dict:
    """Check the exponent bounds for a commutative square of free groups.

    The square is ``f: A -> B`` on top, ``f_prime: A' -> B'`` at the bottom,
    ``g: A -> A'`` and ``h: B -> B'`` vertical, with ``f_prime g = h f``.

    * mode 1, ``h(B) = scalar * B'``:
      ``(exp f) scalar A' <= g(A) <= scalar / gcd(scalar, exp f') A'``
    * mode 2, ``g(A) <= scalar * A'``:
      ``h(B) <= scalar / gcd(scalar, exp f) B'``
    * mode 3, ``exp h`` finite: ``exp g <= (exp f)(exp h)``
    """
    _require_free(f, f_prime, g, h)
    if f.source.generators != g.source.generators or f.target.generators != h.source.generators:
        raise InvalidInput("square sources do not match")
    if f_prime.source.generators != g.target.generators or f_prime.target.generators != h.target.generators:
        raise InvalidInput("square targets do not match")
    if f_prime.matrix @ g.matrix != h.matrix @ f.matrix:
        raise InvalidInput("square does not commute: f' g != h f")
    for name, m in (("f", f), ("f'", f_prime)):
        if not m.is_injective():
            raise InvalidInput(f"{name} is not injective")
        if exponent_morphism(m) == INF:
            raise InvalidInput(f"{name} has infinite exponent")
    exp_f = exponent_morphism(f)
    exp_fp = exponent_morphism(f_prime)
    report: dict = {"mode": mode, "exp_f": exp_f, "exp_f_prime": exp_fp}
    A_prime = g.target.generators
    gA = Lattice.from_columns(g.matrix)
    if mode == 1:
        lam = scalar
        if not lam:
            raise InvalidInput("mode 1 needs a nonzero scalar")
        if Lattice.from_columns(h.matrix) != Lattice.whole(h.target.generators).scaled(lam):
            raise InvalidInput("mode 1 requires h(B) = scalar * B'")
        lower = Lattice.whole(A_prime).scaled(exp_f * lam)
        upper_c = abs(lam) // gcd(lam, exp_fp)
        report.update(
            lower_multiplier=exp_f * abs(lam),
            upper_multiplier=upper_c,
            lower_bound=gA.contains_lattice(lower),
            upper_bound=_divisible(g.matrix, upper_c),
        )
        report["holds"] = report["lower_bound"] and report["upper_bound"]
    elif mode == 2:
        mu = scalar
        if not mu:
            raise InvalidInput("mode 2 needs a nonzero scalar")
        if not _divisible(g.matrix, mu):
            raise InvalidInput("mode 2 requires g(A) <= scalar * A'")
        c = abs(mu) // gcd(mu, exp_f)
        report.update(multiplier=c, bound=_divisible(h.matrix, c))
        report["holds"] = report["bound"]
    elif mode == 3:
        exp_h = exponent_morphism(h)
        if exp_h == INF:
            raise InvalidInput("mode 3 requires h to have finite exponent")
        exp_g = exponent_morphism(g)
        report.update(exp_g=exp_g, exp_h=exp_h, bound=exp_g != INF and exp_g <= exp_f * exp_h)
        report["holds"] = report["bound"]
    else:
        raise InvalidInput(f"unknown mode {mode}")
    return report


def gcd_claim_holds(C_prime: Lattice, C: Lattice, e: int, lam: int) -> bool | None:
    """For ``C' <= C`` with ``e C' <= lam C``, test ``gcd(lam, e) C' <= lam C``.

    Returns ``None`` when the hypothesis fails.
    """
    if not C.contains_lattice(C_prime):
        raise InvalidInput("C' is not contained in C")
    lamC = C.scaled(lam)
    if not lamC.contains_lattice(C_prime.scaled(e)):
        return None
    return lamC.contains_lattice(C_prime.scaled(gcd(lam, e)))


# ---------------------------------------------------------------- bounds

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


def minkowski_bound(n: int) -> int:
    """Minkowski's bound: every finite-order element of GL(n, Z) has order dividing it.

    ``M(n) = prod_p p^(sum_k floor(n / (p^k (p - 1))))``.
    """
    if n <= 0:
        return 1
    result = 1
    for p in range(2, n + 2):
        if not is_prime(p):
            continue
        e = 0
        q = p - 1
        while q <= n:
            e += n // q
            q *= p
        result *= p**e
    return result


def subgroup_type_p(p: int, d: int, m: int, generators: Sequence[Sequence[int]]) -> list[int]:
    """Type ``(d_1 >= ... >= d_m)`` of the subgroup of ``(Z/p^d)^m`` spanned by ``generators``.

    The subgroup is isomorphic (by an automorphism of the ambient group) to
    ``prod_j p^(d - d_j) Z/p^d``.
    """
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    if d < 1 or m < 0:
        raise InvalidInput("need d >= 1 and m >= 0")
    q = p**d
    cols = []
    for g in generators:
        if len(g) != m:
            raise InvalidInput(f"generator of length {len(g)} in (Z/p^d)^{m}")
        cols.append([x % q for x in g])
    cols += [[q if i == j else 0 for i in range(m)] for j in range(m)]
    if m == 0:
        return []
    _, D, _ = smith_normal_form(IntMatrix.from_columns(cols, m))
    out = []
    for s in diagonal_of(D)[:m]:
        a = 0
        while s % p == 0:
            s //= p
            a += 1
        out.append(d - a)
    return sorted(out, reverse=True)
