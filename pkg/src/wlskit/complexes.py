"""Bounded cochain complexes of finitely generated abelian groups.

Also the two torsion lemmas for complexes whose rationalized differential
vanishes: torsion of cohomology is bounded by torsion of the cochains, and
the natural injection ``H^k(C)_Z -> C^k_Z`` has exponent bounded by the
torsion of the next cochain group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .abelian import (
    INF,
    Morphism,
    Presentation,
    exponent_morphism,
    free_part_matrix,
    subquotient,
)
from .lattice import Lattice
from .matrix import IntMatrix, InvalidInput

_ZERO = Presentation(0)


def torsion_exponent(P: Presentation) -> int:
    """Exponent of the torsion subgroup (1 when torsion-free)."""
    return P.torsion[-1] if P.torsion else 1


class CochainComplex:
    """``C^kmin -> ... -> C^kmax`` with ``d^k: C^k -> C^{k+1}``.

    Groups outside the degree range are zero.  ``differentials[i]`` is
    ``d^{kmin + i}`` and there are ``kmax - kmin`` of them.
    """

    def __init__(self, kmin: int, groups: Sequence[Presentation], differentials: Sequence[Morphism | IntMatrix | Sequence[Sequence[int]]]):
        if not groups:
            raise InvalidInput("a complex needs at least one degree")
        if len(differentials) != len(groups) - 1:
            raise InvalidInput(f"{len(groups)} groups need {len(groups) - 1} differentials, got {len(differentials)}")
        self.kmin = kmin
        self.kmax = kmin + len(groups) - 1
        self.groups = tuple(groups)
        ds = []
        for i, d in enumerate(differentials):
            if not isinstance(d, Morphism):
                try:
                    d = Morphism(groups[i], groups[i + 1], d)
                except InvalidInput as exc:
                    raise InvalidInput(f"differentials[{i}]: {exc}") from None
            ds.append(d)
        self.differentials = tuple(ds)
        for i in range(len(ds) - 1):
            if not ds[i + 1].compose(ds[i]).is_zero():
                raise InvalidInput(f"differentials[{i + 1}] o differentials[{i}] is not zero")
        self._kernels: dict[int, Lattice] = {}
        self._images: dict[int, Lattice] = {}

    @property
    def degrees(self) -> range:
        return range(self.kmin, self.kmax + 1)

    def group(self, k: int) -> Presentation:
        if self.kmin <= k <= self.kmax:
            return self.groups[k - self.kmin]
        return _ZERO

    def d(self, k: int) -> Morphism:
        if self.kmin <= k < self.kmax:
            return self.differentials[k - self.kmin]
        return Morphism.zero(self.group(k), self.group(k + 1))

    def cocycles(self, k: int) -> Lattice:
        """Lattice of cocycle representatives (contains the relations of ``C^k``)."""
        if k not in self._kernels:
            self._kernels[k] = Lattice.preimage(self.d(k).matrix, self.group(k + 1).relation_lattice)
        return self._kernels[k]

    def coboundaries(self, k: int) -> Lattice:
        """``im d^{k-1}`` plus the relations of ``C^k``."""
        if k not in self._images:
            C = self.group(k)
            self._images[k] = Lattice.from_columns(self.d(k - 1).matrix) + C.relation_lattice
        return self._images[k]

    def cohomology_group(self, k: int) -> tuple[Presentation, IntMatrix]:
        """``H^k`` plus the ambient representatives of its generators (as columns)."""
        return subquotient(self.cocycles(k), self.coboundaries(k))


def cohomology(C: CochainComplex) -> dict[int, Presentation]:
    return {k: C.cohomology_group(k)[0] for k in C.degrees}


def betti_numbers(C: CochainComplex) -> dict[int, int]:
    return {k: H.rank for k, H in cohomology(C).items()}


def is_dQ_zero(C: CochainComplex) -> dict[int, bool]:
    """Degree ``k`` maps to whether ``d^k`` lands in the torsion of ``C^{k+1}``."""
    out = {}
    for k in C.degrees:
        d = C.d(k)
        out[k] = free_part_matrix(d.source, d.target, d.matrix).is_zero()
    return out


def _require_dQ_zero(C: CochainComplex) -> None:
    bad = [k for k, ok in is_dQ_zero(C).items() if not ok]
    if bad:
        raise InvalidInput(f"rationalized differential is nonzero in degree {bad[0]}")


def torsion_comparison(C: CochainComplex) -> dict[int, dict]:
    """Per degree: exponent of ``Tor H^k`` against exponent of ``Tor C^k``."""
    _require_dQ_zero(C)
    report = {}
    for k, H in cohomology(C).items():
        eh, ec = torsion_exponent(H), torsion_exponent(C.group(k))
        report[k] = {"exp_tor_H": eh, "exp_tor_C": ec, "holds": eh <= ec}
    return report


@dataclass(frozen=True)
class LatticeInclusion:
    degree: int
    map: Morphism  # free H^k_Z -> free C^k_Z
    exponent: int | float
    bound: int
    holds: bool


def _inclusion_matrix(C: CochainComplex, k: int) -> tuple[Presentation, IntMatrix, IntMatrix]:
    H, B = C.cohomology_group(k)
    return H, B, free_part_matrix(H, C.group(k), B)


def lattice_inclusion(C: CochainComplex, k: int) -> LatticeInclusion:
    """The injection ``H^k(C)_Z -> C^k_Z`` induced by cocycles sitting in ``C^k``.

    Needs ``d_Q = 0``: coboundaries are then torsion, so the map is defined
    on lattice parts even though ``H^k -> C^k`` is not defined integrally.
    """
    _require_dQ_zero(C)
    H, _, M = _inclusion_matrix(C, k)
    f = Morphism(Presentation.free(H.rank), Presentation.free(C.group(k).rank), M, check=False)
    if not f.is_injective():
        raise AssertionError(f"lattice inclusion in degree {k} is not injective")
    e = exponent_morphism(f)
    bound = torsion_exponent(C.group(k + 1))
    return LatticeInclusion(k, f, e, bound, e != INF and e <= bound)


class ChainMap:
    """Degree-preserving maps ``f^k: C^k -> D^k`` with ``d f = f d``."""

    def __init__(self, source: CochainComplex, target: CochainComplex, maps: dict[int, Morphism | IntMatrix | Sequence[Sequence[int]]]):
        self.source = source
        self.target = target
        fs = {}
        for k in source.degrees:
            m = maps.get(k)
            if m is None:
                m = Morphism.zero(source.group(k), target.group(k))
            elif not isinstance(m, Morphism):
                try:
                    m = Morphism(source.group(k), target.group(k), m)
                except InvalidInput as exc:
                    raise InvalidInput(f"maps[{k}]: {exc}") from None
            fs[k] = m
        extra = sorted(set(maps) - set(source.degrees))
        if extra:
            raise InvalidInput(f"maps[{extra[0]}]: degree outside the source complex")
        self.maps = fs
        for k in source.degrees:
            lhs = target.d(k).compose(fs[k])
            rhs = self.at(k + 1).compose(source.d(k))
            if not lhs.equals(rhs):
                raise InvalidInput(f"maps[{k}]: does not commute with the differentials")

    def at(self, k: int) -> Morphism:
        if k in self.maps:
            return self.maps[k]
        return Morphism.zero(self.source.group(k), self.target.group(k))

    def on_cohomology(self, k: int) -> Morphism:
        Hs, Bs = self.source.cohomology_group(k)
        Ht, _ = self.target.cohomology_group(k)
        K = self.target.cocycles(k)
        f = self.at(k)
        cols = [K.coords(f(b)) for b in Bs.columns()]
        return Morphism(Hs, Ht, IntMatrix.from_columns(cols, Ht.generators))


def inclusion_naturality(f: ChainMap, k: int) -> bool:
    """Whether ``iota_D o H(f)_Z == (f^k)_Z o iota_C`` on lattice parts."""
    C, D = f.source, f.target
    _require_dQ_zero(C)
    _require_dQ_zero(D)
    Hc, _, ic = _inclusion_matrix(C, k)
    Hd, _, id_ = _inclusion_matrix(D, k)
    Hf = f.on_cohomology(k)
    hf = free_part_matrix(Hc, Hd, Hf.matrix)
    fk = f.at(k)
    ff = free_part_matrix(fk.source, fk.target, fk.matrix)
    return id_ @ hf == ff @ ic

