"""Seeded random generators for complexes, filtered complexes and squares.

Every generator takes a ``random.Random`` so that test runs and CLI
reports are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, lcm

from .abelian import Morphism, Presentation
from .complexes import CochainComplex
from .lattice import Lattice
from .matrix import IntMatrix, rank_q, solve_q
from .spectral import FilteredComplex


def random_matrix(rng: random.Random, rows: int, cols: int, lo: int = -2, hi: int = 2) -> IntMatrix:
    return IntMatrix(rows, cols, [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)])


def left_kernel(M: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of ``{y : y^T M = 0}``."""
    return list(Lattice.preimage(M.T, Lattice.zero(M.cols)).basis)


def random_free_differentials(rng: random.Random, ranks: list[int], lo: int = -2, hi: int = 2) -> list[IntMatrix]:
    """Differentials ``d^k: Z^{ranks[k]} -> Z^{ranks[k+1]}`` with ``d^{k+1} d^k = 0``.

    Each new differential factors through the cokernel-free quotient by
    composing a random matrix with a left-kernel basis of the previous one.
    """
    ds = []
    for k in range(len(ranks) - 1):
        if not ds:
            ds.append(random_matrix(rng, ranks[1], ranks[0], lo, hi))
            continue
        N = left_kernel(ds[-1])
        if not N:
            ds.append(IntMatrix.zeros(ranks[k + 1], ranks[k]))
            continue
        M = random_matrix(rng, ranks[k + 1], len(N), -1, 1)
        ds.append(M @ IntMatrix(len(N), ranks[k], N))
    return ds


def _span_plus_image(rng, n, count, d_prev: IntMatrix | None, source_gens, lo=-2, hi=2):
    gens = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(count)]
    if d_prev is not None:
        gens += [list(d_prev.apply(g)) for g in source_gens]
    return [g for g in gens if any(g)]


def random_subcomplex(rng: random.Random, ranks: list[int], ds: list[IntMatrix], extra: int = 1, torsion_multiplier: int | None = None) -> list[list[list[int]]]:
    """Generators of a random subcomplex ``S^k = span(V^k) + d(S^{k-1})``.

    With ``torsion_multiplier = m``, ``V^k`` also contains ``m`` times the
    columns of ``d^{k-1}``, so every coboundary becomes torsion in the
    quotient complex.
    """
    S: list[list[list[int]]] = []
    for k, n in enumerate(ranks):
        gens = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(0, extra))]
        if k:
            d = ds[k - 1]
            gens += [list(d.apply(g)) for g in S[k - 1]]
            if torsion_multiplier:
                gens += [[torsion_multiplier * x for x in c] for c in d.columns()]
        S.append([g for g in gens if any(g)])
    return S


def random_complex(rng: random.Random, length: int = 3, max_rank: int = 4, torsion: bool = True, dq_zero: bool = False) -> CochainComplex:
    ranks = [rng.randint(0, max_rank) for _ in range(length + 1)]
    ds = random_free_differentials(rng, ranks)
    return _quotient_complex(rng, ranks, ds, torsion, dq_zero)


def _quotient_complex(rng, ranks, ds, torsion, dq_zero) -> CochainComplex:
    if torsion or dq_zero:
        mult = rng.randint(2, 6) if dq_zero else None
        S = random_subcomplex(rng, ranks, ds, torsion_multiplier=mult)
    else:
        S = [[] for _ in ranks]
    groups = [Presentation(n, IntMatrix.from_columns(S[k], n)) for k, n in enumerate(ranks)]
    morphs = [Morphism(groups[k], groups[k + 1], d, check=False) for k, d in enumerate(ds)]
    return CochainComplex(0, groups, morphs)


def random_filtered_complex(rng: random.Random, degrees: int = 3, max_rank: int = 4, max_length: int = 3, torsion: bool = True) -> FilteredComplex:
    """A random complex with a random compatible filtration of length ``<= max_length``."""
    ranks = [rng.randint(0, max_rank) for _ in range(degrees + 1)]
    ds = random_free_differentials(rng, ranks)
    C = _quotient_complex(rng, ranks, ds, torsion, False)
    L = rng.randint(1, max_length)
    # F^p built from the top step down so that each F^p is d-stable
    steps: dict[int, list] = {k: [None] * (L + 1) for k in range(len(ranks))}
    for p in range(L, 0, -1):
        for k, n in enumerate(ranks):
            gens = [list(g) for g in (steps[k][p + 1] if p < L else [])]
            gens += _span_plus_image(
                rng,
                n,
                rng.randint(0, 2) if n else 0,
                ds[k - 1] if k else None,
                steps[k - 1][p] if k else [],
            )
            steps[k][p] = gens
    for k, n in enumerate(ranks):
        steps[k][0] = [[int(i == j) for i in range(n)] for j in range(n)]
    return FilteredComplex(C, steps)


def random_dq_zero_complex(rng: random.Random, length: int = 3, max_rank: int = 4) -> CochainComplex:
    return random_complex(rng, length, max_rank, torsion=True, dq_zero=True)


# ---------------------------------------------------------------- groups and squares

def random_nonsingular(rng: random.Random, n: int, lo: int = -3, hi: int = 3) -> IntMatrix:
    while True:
        M = random_matrix(rng, n, n, lo, hi)
        if M.det():
            return M


def random_unimodular(rng: random.Random, n: int, steps: int = 8) -> IntMatrix:
    """A product of random elementary row operations and sign flips."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps if n > 1 else 0):
        i, j = rng.sample(range(n), 2)
        q = rng.choice([-2, -1, 1, 2])
        rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    for i in range(n):
        if rng.random() < 0.3:
            rows[i] = [-a for a in rows[i]]
    return IntMatrix(n, n, rows)


def random_finite_presentation(rng: random.Random, max_generators: int = 3, lo: int = -4, hi: int = 4) -> Presentation:
    n = rng.randint(1, max_generators)
    return Presentation(n, random_nonsingular(rng, n, lo, hi))


def _rational_inverse_times(A: IntMatrix, B: IntMatrix) -> list[list[Fraction]]:
    """``A^{-1} B`` for nonsingular square ``A``."""
    cols = [solve_q(A.tolist(), A.cols, B.column(j)) for j in range(B.cols)]
    return [[cols[j][i] for j in range(B.cols)] for i in range(A.rows)]


def random_square(rng: random.Random, mode: int, max_rank: int = 3) -> tuple[Morphism, Morphism, Morphism, Morphism, int | None]:
    """A commutative square ``f' g = h f`` of free groups meeting the hypotheses of ``mode``.

    ``f: A -> B`` and ``f': A' -> B'`` are injective with finite exponent.
    Mode 1 makes ``h = lambda * W`` with ``W`` unimodular, mode 2 returns a
    ``mu`` dividing ``g``, mode 3 makes ``h`` of full rank.  Returns
    ``(f, f', g, h, scalar)``.
    """
    if mode == 1:
        n = rng.randint(1, max_rank)
        lam = rng.randint(1, 6)
        W = random_unimodular(rng, n)
        Winv = IntMatrix(n, n, [[int(x) for x in r] for r in _rational_inverse_times(W, IntMatrix.identity(n))])
        fp = random_nonsingular(rng, n)
        g0 = random_nonsingular(rng, n)
        f, g, h, m, scalar = Winv @ fp @ g0, g0.scale(lam), W.scale(lam), n, lam
    else:
        while True:
            n = rng.randint(1, max_rank)
            m = rng.randint(1, n) if mode == 3 else rng.randint(1, max_rank)
            f = random_nonsingular(rng, n)
            fp = random_nonsingular(rng, m)
            h0 = random_matrix(rng, m, n)
            if mode == 3 and rank_q(h0.tolist(), n) < m:
                continue
            q = _rational_inverse_times(fp, h0 @ f)
            c = 1
            for row in q:
                for x in row:
                    c = lcm(c, x.denominator)
            g = IntMatrix(m, n, [[int(x * c) for x in row] for row in q])
            h = h0.scale(c)
            break
        scalar = None
        if mode == 2:
            content = 0
            for row in g.tolist():
                for x in row:
                    content = gcd(content, x)
            divisors = [d for d in range(1, content + 1) if content % d == 0] if content else list(range(1, 7))
            scalar = rng.choice(divisors)
    A, B, Ap, Bp = (Presentation.free(k) for k in (n, n, m, m))
    return Morphism(A, B, f), Morphism(Ap, Bp, fp), Morphism(A, Ap, g), Morphism(B, Bp, h), scalar
