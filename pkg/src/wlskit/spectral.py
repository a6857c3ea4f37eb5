"""Spectral sequence of a filtered cochain complex, over Z and over Q.

For a decreasing filtration ``F^p`` of ``C`` (``F^p = C`` for ``p <= 0``,
``F^p = 0`` for ``p > L``), the page ``r`` entry in total degree
``n = p + q`` is

    Z_r^p = F^p C^n  meet  d^{-1}(F^{p+r} C^{n+1})
    B_r^p = d(F^{p-r+1} C^{n-1})  meet  F^p C^n
    E_r^{p,q} = Z_r^p / (Z_{r-1}^{p+1} + B_r^p)

and ``d_r`` sends the class of ``x`` to the class of ``d x``.  The same
formulas with rational subspaces give the rational pages, computed
independently so that comparing ranks with dimensions is a real check.

Pages ``r = 0 .. L + 2`` are computed; ``E_{L+2}`` is the limit page.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from .abelian import (
    INF,
    Morphism,
    Presentation,
    Subgroup,
    exponent_morphism,
    free_part_matrix,
    kernel,
    subquotient,
)
from .complexes import ChainMap, CochainComplex, torsion_exponent
from .lattice import Lattice
from .matrix import IntMatrix, InvalidInput, QSubspace, rank_q


class FilteredComplex:
    """A cochain complex with a finite decreasing filtration by subcomplexes.

    ``filtration[k]`` lists generators of ``F^p C^k`` for ``p = 0 .. L``;
    ``F^0`` must be all of ``C^k`` and ``F^{L+1} = 0``.
    """

    def __init__(self, complex: CochainComplex, filtration: dict[int, Sequence[Sequence[Sequence[int]]]]):
        C = complex
        self.complex = C
        lengths = {len(v) for v in filtration.values()}
        if len(lengths) > 1:
            raise InvalidInput("filtration: every degree must list the same number of steps")
        self.length = (lengths.pop() - 1) if lengths else 0
        extra = sorted(set(filtration) - set(C.degrees))
        if extra:
            raise InvalidInput(f"filtration[{extra[0]}]: degree outside the complex")
        self._F: dict[int, list[Lattice]] = {}
        self._generators: dict[int, list] = {}
        for k in C.degrees:
            G = C.group(k)
            steps = filtration.get(k)
            if steps is None:
                steps = [[list(c) for c in IntMatrix.identity(G.generators).columns()]] + [[] for _ in range(self.length)]
            lats = []
            for p, gens in enumerate(steps):
                try:
                    lats.append(Subgroup(G, gens).lattice)
                except InvalidInput as exc:
                    raise InvalidInput(f"filtration[{k}][{p}]: {exc}") from None
            if lats[0] != Lattice.whole(G.generators):
                raise InvalidInput(f"filtration[{k}][0]: F^0 must be the whole group")
            for p in range(1, len(lats)):
                if not lats[p - 1].contains_lattice(lats[p]):
                    raise InvalidInput(f"filtration[{k}][{p}]: filtration is not decreasing")
            self._F[k] = lats
            self._generators[k] = [[list(g) for g in gens] for gens in steps]
        for k in C.degrees:
            d = C.d(k)
            for p in range(self.length + 1):
                if not self.F(p, k + 1).contains_lattice(self.F(p, k).image(d.matrix)):
                    raise InvalidInput(f"filtration[{k}][{p}]: differential does not preserve the filtration")
        self._pages_z: list[SpectralPage] | None = None
        self._pages_q: list[RationalPage] | None = None

    def generators(self, p: int, k: int) -> list[list[int]]:
        """Generators of ``F^p C^k`` as given (without the relations)."""
        n = self.complex.group(k).generators
        if p <= 0:
            return [[int(i == j) for i in range(n)] for j in range(n)]
        if p > self.length or k not in self._generators:
            return []
        return self._generators[k][p]

    def F(self, p: int, k: int) -> Lattice:
        G = self.complex.group(k)
        if p <= 0:
            return Lattice.whole(G.generators)
        if p > self.length or k not in self._F:
            return G.relation_lattice
        return self._F[k][p]

    @property
    def cells(self) -> list[tuple[int, int]]:
        return [(p, n - p) for n in self.complex.degrees for p in range(self.length + 1)]

    @property
    def last_page(self) -> int:
        return self.length + 2

    def pages(self, mode: str = "Z") -> list:
        if mode == "Z":
            if self._pages_z is None:
                self._pages_z = _integral_pages(self)
            return self._pages_z
        if mode == "Q":
            if self._pages_q is None:
                self._pages_q = _rational_pages(self)
            return self._pages_q
        raise InvalidInput(f"unknown coefficient mode {mode!r}")


@dataclass
class SpectralPage:
    """Integral page: entries are presentations, differentials are morphisms."""

    r: int
    entries: dict[tuple[int, int], Presentation]
    differentials: dict[tuple[int, int], Morphism]
    representatives: dict[tuple[int, int], IntMatrix] = field(repr=False)
    numerators: dict[tuple[int, int], Lattice] = field(repr=False)

    def entry(self, p: int, q: int) -> Presentation:
        return self.entries.get((p, q), Presentation(0))


@dataclass
class RationalPage:
    """Rational page: dimensions of entries and ranks of differentials."""

    r: int
    dims: dict[tuple[int, int], int]
    ranks: dict[tuple[int, int], int]

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0)


def _integral_pages(FC: FilteredComplex) -> list[SpectralPage]:
    C = FC.complex
    zcache: dict[tuple[int, int, int], Lattice] = {}

    def Z(r: int, p: int, n: int) -> Lattice:
        key = (r, p, n)
        if key not in zcache:
            zcache[key] = FC.F(p, n).intersect(Lattice.preimage(C.d(n).matrix, FC.F(p + r, n + 1)))
        return zcache[key]

    def B(r: int, p: int, n: int) -> Lattice:
        img = FC.F(p - r + 1, n - 1).image(C.d(n - 1).matrix) + C.group(n).relation_lattice
        return img.intersect(FC.F(p, n))

    pages = []
    for r in range(FC.last_page + 1):
        entries, reps, nums = {}, {}, {}
        for p, q in FC.cells:
            n = p + q
            num = Z(r, p, n)
            den = Z(r - 1, p + 1, n) + B(r, p, n)
            E, M = subquotient(num, den)
            entries[p, q], reps[p, q], nums[p, q] = E, M, num
        diffs = {}
        for p, q in FC.cells:
            n = p + q
            tgt = (p + r, q - r + 1)
            if tgt in entries:
                tnum = nums[tgt]
                cols = [tnum.coords(C.d(n)(b)) for b in reps[p, q].columns()]
                M = IntMatrix.from_columns(cols, tnum.rank)
                diffs[p, q] = Morphism(entries[p, q], entries[tgt], M)
            else:
                diffs[p, q] = Morphism.zero(entries[p, q], Presentation(0))
        pages.append(SpectralPage(r, entries, diffs, reps, nums))
    return pages


def _rational_pages(FC: FilteredComplex) -> list[RationalPage]:
    C = FC.complex
    fq: dict[tuple[int, int], QSubspace] = {}
    zcache: dict[tuple[int, int, int], QSubspace] = {}

    def FQ(p: int, n: int) -> QSubspace:
        key = (min(max(p, 0), FC.length + 1), n)
        if key not in fq:
            G = C.group(n)
            fq[key] = QSubspace(G.generators, FC.generators(*key) + G.relations.columns())
        return fq[key]

    def dq(n: int) -> list[list[int]]:
        return [list(r) for r in C.d(n).matrix.entries]

    def Z(r: int, p: int, n: int) -> QSubspace:
        key = (r, p, n)
        if key not in zcache:
            zcache[key] = FQ(p, n).intersect(QSubspace.preimage(dq(n), C.group(n).generators, FQ(p + r, n + 1)))
        return zcache[key]

    def B(r: int, p: int, n: int) -> QSubspace:
        G = C.group(n)
        img = FQ(p - r + 1, n - 1).image(dq(n - 1), G.generators) + QSubspace(G.generators, G.relations.columns())
        return img.intersect(FQ(p, n))

    pages = []
    for r in range(FC.last_page + 1):
        dims, ranks = {}, {}
        for p, q in FC.cells:
            n = p + q
            num = Z(r, p, n)
            den = Z(r - 1, p + 1, n) + B(r, p, n)
            dims[p, q] = num.dim - den.dim
            # classes killed by d_r are Z_{r+1} + den
            ranks[p, q] = num.dim - (Z(r + 1, p, n) + den).dim
        pages.append(RationalPage(r, dims, ranks))
    return pages


def spectral_pages(FC: FilteredComplex, mode: str = "Z", start: int = 2) -> list:
    """Pages ``start .. L + 2``; the last one is the limit page."""
    return FC.pages(mode)[start:]


# ---------------------------------------------------------------- checks

def _total_filtration(FC: FilteredComplex, n: int) -> list[tuple[int, Presentation]]:
    C = FC.complex
    K, I = C.cocycles(n), C.coboundaries(n)
    out = []
    for p in range(FC.length + 1):
        top = FC.F(p, n).intersect(K) + I
        bot = FC.F(p + 1, n).intersect(K) + I
        out.append((p, subquotient(top, bot)[0]))
    return out


def convergence_check(FC: FilteredComplex) -> dict:
    """Compare the limit page with the associated graded of total cohomology."""
    C = FC.complex
    Einf = FC.pages("Z")[-1]
    Qinf = FC.pages("Q")[-1]
    failures = []
    betti = {}
    for n in C.degrees:
        H, _ = C.cohomology_group(n)
        betti[n] = H.rank
        ranks = 0
        for p, G in _total_filtration(FC, n):
            E = Einf.entry(p, n - p)
            if E.canonical != G.canonical:
                failures.append({"p": p, "q": n - p, "limit": str(E), "graded": str(G)})
            ranks += E.rank
        dims = sum(Qinf.dim(p, n - p) for p in range(FC.length + 1))
        if ranks != H.rank or dims != H.rank:
            failures.append({"degree": n, "betti": H.rank, "integral_ranks": ranks, "rational_dims": dims})
    return {"holds": not failures, "betti": betti, "failures": failures}


def recomputation_check(FC: FilteredComplex) -> dict:
    """``d_r o d_r = 0`` and ``E_{r+1} = ker d_r / im d_r`` on every page."""
    pages = FC.pages("Z")
    failures = []
    for page, nxt in zip(pages, pages[1:]):
        r = page.r
        for (p, q), d in page.differentials.items():
            tgt = (p + r, q - r + 1)
            if tgt in page.differentials and not page.differentials[tgt].compose(d).is_zero():
                failures.append({"r": r, "p": p, "q": q, "reason": "d_r o d_r != 0"})
            ker = kernel(d).lattice
            src = (p - r, q + r - 1)
            E = page.entries[p, q]
            if src in page.differentials:
                im = Lattice.from_columns(page.differentials[src].matrix) + E.relation_lattice
            else:
                im = E.relation_lattice
            H, _ = subquotient(ker, im)
            if H.canonical != nxt.entries[p, q].canonical:
                failures.append({"r": r, "p": p, "q": q, "reason": f"homology {H} != next page {nxt.entries[p, q]}"})
    qpages = FC.pages("Q")
    for page, nxt in zip(qpages, qpages[1:]):
        r = page.r
        for (p, q), dim in page.dims.items():
            expected = dim - page.ranks[p, q] - page.ranks.get((p - r, q + r - 1), 0)
            if expected != nxt.dims[p, q]:
                failures.append({"r": r, "p": p, "q": q, "reason": "rational page recomputation"})
    return {"holds": not failures, "failures": failures}


def differential_rank(d: Morphism) -> int:
    """Rank of the rationalized morphism."""
    M = free_part_matrix(d.source, d.target, d.matrix)
    return rank_q(M.entries, M.cols)


def verify_tensoring_Q(FC: FilteredComplex) -> dict:
    """Ranks of integral pages and differentials against rational dimensions and ranks."""
    for zp, qp in zip(FC.pages("Z"), FC.pages("Q")):
        for cell, E in zp.entries.items():
            if E.rank != qp.dims[cell]:
                return {"holds": False, "r": zp.r, "p": cell[0], "q": cell[1], "integral_rank": E.rank, "rational_dim": qp.dims[cell]}
            dr = differential_rank(zp.differentials[cell])
            if dr != qp.ranks[cell]:
                return {"holds": False, "r": zp.r, "p": cell[0], "q": cell[1], "integral_differential_rank": dr, "rational_rank": qp.ranks[cell]}
    return {"holds": True}


def nonzero_rational_differentials(FC: FilteredComplex, mode: str = "Q", start: int = 2) -> list[tuple[int, int, int]]:
    """``(r, p, q)`` of every ``d_r`` (``r >= start``) that is nonzero after tensoring with Q."""
    out = []
    for page in FC.pages(mode)[start:]:
        if mode == "Q":
            out += [(page.r, p, q) for (p, q), rk in sorted(page.ranks.items()) if rk]
        else:
            for (p, q), d in sorted(page.differentials.items()):
                if not free_part_matrix(d.source, d.target, d.matrix).is_zero():
                    out.append((page.r, p, q))
    return out


def degenerates_at_E2_Q(FC: FilteredComplex) -> bool:
    return not nonzero_rational_differentials(FC, "Q")


# ---------------------------------------------------------------- page inclusions

def _step_inclusion(FC: FilteredComplex, r: int, cell: tuple[int, int]) -> IntMatrix:
    """Free part of ``(E_{r+1})_Z -> (E_r)_Z`` induced by ``Z_{r+1} <= Z_r``."""
    pages = FC.pages("Z")
    hi, lo = pages[r + 1], pages[r]
    num = lo.numerators[cell]
    cols = [num.coords(b) for b in hi.representatives[cell].columns()]
    M = IntMatrix.from_columns(cols, num.rank)
    return free_part_matrix(hi.entries[cell], lo.entries[cell], M)


def page_inclusion(FC: FilteredComplex, k: int, c_x: int | None = None, c_const: int | None = None) -> dict:
    """Stacked injections ``(E_k)_Z -> (E_2)_Z`` for every cell, with exponent bounds.

    Requires every ``d_r`` with ``2 <= r < k`` to vanish rationally.  When
    both constants are supplied, each cell also reports whether its
    exponent is at most ``c_x^(k-2) * c_const^(q(q-1)/2)``.
    """
    if k < 2 or k > FC.last_page:
        raise InvalidInput(f"page {k} outside 2..{FC.last_page}")
    bad = [t for t in nonzero_rational_differentials(FC, "Q") if t[0] < k]
    if bad:
        r, p, q = bad[0]
        raise InvalidInput(f"d_{r}^{{{p},{q}}} is nonzero over Q")
    pages = FC.pages("Z")
    report = {}
    for cell in FC.cells:
        p, q = cell
        M = IntMatrix.identity(pages[k].entries[cell].rank)
        factors, tor_r, tor_2 = [], [], []
        for r in range(k - 1, 1, -1):
            step = _step_inclusion(FC, r, cell)
            factors.append(exponent_morphism(Morphism(Presentation.free(step.cols), Presentation.free(step.rows), step, check=False)))
            M = step @ M
        for r in range(2, k):
            tgt = (p + r, q - r + 1)
            tor_r.append(torsion_exponent(pages[r].entry(*tgt)))
            tor_2.append(torsion_exponent(pages[2].entry(*tgt)))
        factors.reverse()
        f = Morphism(Presentation.free(M.cols), Presentation.free(M.rows), M, check=False)
        e = exponent_morphism(f)
        prod_r = 1
        for t in tor_r:
            prod_r *= t
        entry = {
            "map": M,
            "injective": f.is_injective(),
            "exponent": e,
            "step_exponents": factors,
            "torsion_exponents": tor_r,
            "torsion_exponents_E2": tor_2,
            "product_bound": prod_r,
            "holds": e != INF
            and e <= prod_r
            and all(a <= b for a, b in zip(factors, tor_r))
            and all(a <= b for a, b in zip(tor_r, tor_2)),
        }
        if c_x is not None and c_const is not None:
            entry["constant_bound"] = c_x ** (k - 2) * c_const ** max(q * (q - 1) // 2, 0)
            entry["within_constant_bound"] = e != INF and e <= entry["constant_bound"]
        report[cell] = entry
    return report


# ---------------------------------------------------------------- filtered maps

class FilteredMap:
    """A chain map between filtered complexes preserving the filtrations."""

    def __init__(self, source: FilteredComplex, target: FilteredComplex, maps: dict):
        self.source = source
        self.target = target
        self.chain_map = ChainMap(source.complex, target.complex, maps)
        L = max(source.length, target.length)
        for k in source.complex.degrees:
            f = self.chain_map.at(k).matrix
            for p in range(1, L + 1):
                if not target.F(p, k).contains_lattice(source.F(p, k).image(f)):
                    raise InvalidInput(f"maps[{k}]: does not preserve filtration step {p}")

    def on_page(self, r: int, cell: tuple[int, int]) -> Morphism:
        sp, tp = self.source.pages("Z")[r], self.target.pages("Z")[r]
        f = self.chain_map.at(sum(cell))
        num = tp.numerators.get(cell)
        E_t = tp.entry(*cell)
        if num is None:
            return Morphism.zero(sp.entry(*cell), E_t)
        cols = [num.coords(f(b)) for b in sp.representatives[cell].columns()]
        return Morphism(sp.entries[cell], E_t, IntMatrix.from_columns(cols, num.rank))


def image_divisibility(f: FilteredMap, n: int, p: int) -> dict:
    """Whether ``f`` induces ``(E_2^{p,q})_Z -> (E_2^{p,q})_Z`` with image ``n^p`` times the target, for all ``q``."""
    scale = n**p
    per_q = {}
    for cell in f.source.cells:
        if cell[0] != p:
            continue
        g = f.on_page(2, cell)
        M = free_part_matrix(g.source, g.target, g.matrix)
        img = Lattice.from_columns(M) if M.cols else Lattice.zero(M.rows)
        per_q[cell[1]] = img == Lattice.whole(M.rows).scaled(scale)
    return {"holds": all(per_q.values()), "per_q": per_q, "scale": scale}


# ---------------------------------------------------------------- degeneracy arithmetic

def degeneracy_bound(n: int, p: int, q: int, k: int, exp_iota_high: int, exp_iota_3: int, exp_W: int) -> tuple[int, int, int]:
    """The divisor chain ``(lambda, mu, Lambda)`` forcing ``d_k`` to vanish for large ``n``.

    ``lambda = n^(p+k) / gcd(n^(p+k), exp_iota_high)``,
    ``mu = lambda / gcd(lambda, exp_iota_3 * n^p)``,
    ``Lambda = mu / gcd(mu, exp_W)``.
    """
    for name, v in (("n", n), ("k", k), ("exp_iota_high", exp_iota_high), ("exp_iota_3", exp_iota_3), ("exp_W", exp_W)):
        if not isinstance(v, int) or v <= 0:
            raise InvalidInput(f"{name} must be a positive integer")
    if p < 0:
        raise InvalidInput("p must be nonnegative")
    top = n ** (p + k)
    lam = top // gcd(top, exp_iota_high)
    mu = lam // gcd(lam, exp_iota_3 * n**p)
    Lam = mu // gcd(mu, exp_W)
    # x / gcd(x, a) >= x / a at each step
    assert Lam * exp_W * exp_iota_high * exp_iota_3 >= n**k
    return lam, mu, Lam


def degeneracy_certificate(FC: FilteredComplex, k: int, divisors: Sequence[int]) -> dict:
    """For each cell, which of ``divisors`` divide the lattice part of ``d_k``.

    ``Lambda`` divides the lattice part exactly when
    ``d_k((E_k)_Z) <= Lambda (E_k)_Z``; if arbitrarily large divisors pass,
    the lattice part is zero and ``d_k`` vanishes over Q.
    """
    if not 2 <= k <= FC.last_page:
        raise InvalidInput(f"page {k} outside 2..{FC.last_page}")
    if any(L <= 0 for L in divisors):
        raise InvalidInput("divisors must be positive")
    page = FC.pages("Z")[k]
    out = {}
    for cell, d in sorted(page.differentials.items()):
        M = free_part_matrix(d.source, d.target, d.matrix)
        content = 0
        for row in M.entries:
            for x in row:
                content = gcd(content, x)
        out[cell] = {
            "content": content,
            "divides": [content % L == 0 for L in divisors],
            "zero_over_Q": content == 0,
        }
    return {"page": k, "divisors": list(divisors), "cells": out}


# ---------------------------------------------------------------- model builders

def tensor_filtered(A: CochainComplex, B: CochainComplex) -> FilteredComplex:
    """Total complex of ``A (x) B`` for free complexes, filtered by ``A``-degree.

    ``d(a (x) b) = da (x) b + (-1)^|a| a (x) db``.  Basis of total degree
    ``n`` is ordered by ``A``-degree, then ``A``-basis, then ``B``-basis.
    """
    for X in (A, B):
        if any(G.relations.cols for G in X.groups) or X.kmin != 0:
            raise InvalidInput("tensor_filtered needs free complexes starting in degree 0")
    top = A.kmax + B.kmax
    index: dict[int, list[tuple[int, int, int]]] = {}
    for n in range(top + 1):
        index[n] = [
            (i, a, b)
            for i in range(max(0, n - B.kmax), min(A.kmax, n) + 1)
            for a in range(A.group(i).generators)
            for b in range(B.group(n - i).generators)
        ]
    groups = [Presentation.free(len(index[n])) for n in range(top + 1)]
    diffs = []
    for n in range(top):
        pos = {key: j for j, key in enumerate(index[n + 1])}
        M = [[0] * len(index[n]) for _ in range(len(index[n + 1]))]
        for col, (i, a, b) in enumerate(index[n]):
            dA = A.d(i).matrix
            for a2 in range(dA.rows):
                c = dA[a2, a]
                if c:
                    M[pos[i + 1, a2, b]][col] += c
            dB = B.d(n - i).matrix
            sign = -1 if i % 2 else 1
            for b2 in range(dB.rows):
                c = dB[b2, b]
                if c:
                    M[pos[i, a, b2]][col] += sign * c
        diffs.append(IntMatrix(len(index[n + 1]), len(index[n]), M))
    C = CochainComplex(0, groups, diffs)
    L = A.kmax
    filtration = {}
    for n in range(top + 1):
        steps = []
        for p in range(L + 1):
            steps.append([[int(j == t) for j in range(len(index[n]))] for t, (i, _, _) in enumerate(index[n]) if i >= p])
        filtration[n] = steps
    return FilteredComplex(C, filtration)


def circle_complex() -> CochainComplex:
    """Cellular cochains of a circle with two vertices and two edges."""
    return CochainComplex(0, [Presentation.free(2), Presentation.free(2)], [[[-1, 1], [1, -1]]])


def product_of_circles() -> FilteredComplex:
    return tensor_filtered(circle_complex(), circle_complex())


def hopf_model() -> FilteredComplex:
    """``Z, Z x, Z y, Z z`` in degrees 0..3 with ``d x = y``; ``y, z`` in filtration 2."""
    C = CochainComplex(
        0,
        [Presentation.free(1)] * 4,
        [[[0]], [[1]], [[0]]],
    )
    return FilteredComplex(C, {0: [[[1]], [], []], 1: [[[1]], [], []], 2: [[[1]], [[1]], [[1]]], 3: [[[1]], [[1]], [[1]]]})
