"""Graded-commutative rings modelling rational cohomology, and WLS invariants.

A ring has a named basis in each degree ``0..n`` and structure constants
for products of basis elements.  Elements of degree ``d`` are coordinate
vectors (tuples of ``Fraction``) in the degree ``d`` basis.  An optional
integral lattice per degree (rows are lattice basis vectors in rational
coordinates) stands for ``H^d(X) / Tor``; the default is the basis itself.

Cup maps, W1/W2 checks, tau, delta_d and C3 follow the conventions:
source of the degree-``d`` cup map is the sum over ``j = 0, 1, ...`` of
``Lambda^{d-2j} H^1``, each summand with index tuples in lexicographic
order, and ``tau`` maps to ``c(tau) omega^j``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, lcm
from typing import Iterable, Mapping, Sequence

from .abelian import INF
from .matrix import IntMatrix, InvalidInput, diagonal_of, nullspace_q, rank_q, smith_normal_form, solve_q

Vector = tuple  # of Fractions

UNIT = "1"


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            raise InvalidInput(f"not a rational number: {x!r}") from None
    raise InvalidInput(f"not a rational number: {x!r}")


class GradedRing:
    """Finite-dimensional graded-commutative Q-algebra in degrees ``0..n``.

    ``products`` maps a pair of basis names to ``{name: coefficient}`` in
    the degree of the product.  Products with the unit are implicit, pairs
    not listed are zero, and a pair given in only one order is completed by
    graded commutativity.  Pairs given in both orders are kept as given so
    that validation can report sign violations.
    """

    def __init__(
        self,
        n: int,
        basis: Mapping[int, Sequence[str]],
        products: Mapping[tuple[str, str], Mapping[str, object]] | Iterable = (),
        lattice: Mapping[int, Sequence[Sequence[object]]] | None = None,
        torsion_exponents: Mapping[int, int] | None = None,
    ):
        if n < 0:
            raise InvalidInput("n: top degree must be nonnegative")
        self.n = n
        self.basis: dict[int, tuple[str, ...]] = {}
        self.degree_of: dict[str, int] = {}
        self.index_of: dict[str, int] = {}
        for d, names in basis.items():
            d = int(d)
            if not 0 <= d <= n:
                raise InvalidInput(f"basis: degree {d} outside 0..{n}")
            for i, name in enumerate(names):
                if name in self.degree_of:
                    raise InvalidInput(f"basis: name {name!r} used twice")
                self.degree_of[name] = d
                self.index_of[name] = i
            self.basis[d] = tuple(names)
        for d in range(n + 1):
            self.basis.setdefault(d, ())
        if self.basis[0] != (UNIT,):
            raise InvalidInput(f"basis: degree 0 must be exactly [{UNIT!r}]")

        if isinstance(products, Mapping):
            items = list(products.items())
        else:
            items = [((p["a"], p["b"]), p["value"]) for p in products]
        given: dict[tuple[str, str], Vector] = {}
        for idx, ((a, b), value) in enumerate(items):
            for name in (a, b):
                if name not in self.degree_of:
                    raise InvalidInput(f"products[{idx}]: unknown basis element {name!r}")
            deg = self.degree_of[a] + self.degree_of[b]
            vec = [Fraction(0)] * self.dim(deg)
            for name, c in value.items():
                c = _frac(c)
                if name not in self.degree_of:
                    raise InvalidInput(f"products[{idx}]: unknown basis element {name!r} in value")
                if self.degree_of[name] != deg:
                    raise InvalidInput(f"products[{idx}]: {name!r} has degree {self.degree_of[name]}, product {a}*{b} has degree {deg}")
                vec[self.index_of[name]] += c
            if (a, b) in given and given[a, b] != tuple(vec):
                raise InvalidInput(f"products[{idx}]: conflicting values for {a}*{b}")
            given[a, b] = tuple(vec)
        self._given = dict(given)
        table: dict[tuple[str, str], Vector] = dict(given)
        for (a, b), vec in given.items():
            if (b, a) not in table:
                sign = -1 if self.degree_of[a] * self.degree_of[b] % 2 else 1
                table[b, a] = tuple(sign * x for x in vec)
        self._table = table

        self.lattice: dict[int, tuple[tuple[Fraction, ...], ...]] = {}
        for d in range(n + 1):
            rows = (lattice or {}).get(d, (lattice or {}).get(str(d)))
            if rows is None:
                rows = [[int(i == j) for j in range(self.dim(d))] for i in range(self.dim(d))]
            rows = tuple(tuple(_frac(x) for x in r) for r in rows)
            if len(rows) != self.dim(d) or any(len(r) != self.dim(d) for r in rows):
                raise InvalidInput(f"lattice[{d}]: expected a {self.dim(d)}x{self.dim(d)} basis")
            if rank_q(rows, self.dim(d)) != self.dim(d):
                raise InvalidInput(f"lattice[{d}]: rows are linearly dependent")
            self.lattice[d] = rows
        self.torsion_exponents = {int(k): int(v) for k, v in (torsion_exponents or {}).items()}
        self._monomials: dict[tuple[int, ...], Vector] = {}

    # ------------------------------------------------------------ basics

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, ())) if 0 <= d <= self.n else 0

    @property
    def betti(self) -> list[int]:
        return [self.dim(d) for d in range(self.n + 1)]

    def zero(self, d: int) -> Vector:
        return (Fraction(0),) * self.dim(d)

    def unit(self) -> Vector:
        return (Fraction(1),)

    def element(self, d: int, coords: Sequence) -> Vector:
        if len(coords) != self.dim(d):
            raise InvalidInput(f"element of degree {d} needs {self.dim(d)} coordinates, got {len(coords)}")
        return tuple(_frac(c) for c in coords)

    def basis_element(self, name: str) -> tuple[int, Vector]:
        d = self.degree_of[name]
        return d, tuple(Fraction(int(i == self.index_of[name])) for i in range(self.dim(d)))

    def basis_product(self, a: str, b: str) -> Vector:
        da, db = self.degree_of[a], self.degree_of[b]
        if a == UNIT:
            return self.basis_element(b)[1]
        if b == UNIT:
            return self.basis_element(a)[1]
        return self._table.get((a, b), self.zero(da + db))

    def mul(self, d1: int, u: Vector, d2: int, v: Vector) -> Vector:
        d = d1 + d2
        out = [Fraction(0)] * self.dim(d)
        if not out:
            return ()
        for i, x in enumerate(u):
            if not x:
                continue
            a = self.basis[d1][i]
            for j, y in enumerate(v):
                if not y:
                    continue
                w = self.basis_product(a, self.basis[d2][j])
                c = x * y
                for k, z in enumerate(w):
                    if z:
                        out[k] += c * z
        return tuple(out)

    def power(self, d: int, u: Vector, k: int) -> tuple[int, Vector]:
        deg, acc = 0, self.unit()
        for _ in range(k):
            acc = self.mul(deg, acc, d, u)
            deg += d
        return deg, acc

    def monomial(self, idx: Sequence[int]) -> Vector:
        """Product of degree-one basis elements ``x_{i1} ... x_{ik}`` in the given order."""
        idx = tuple(idx)
        if idx not in self._monomials:
            if not idx:
                val = self.unit()
            else:
                prev = self.monomial(idx[:-1])
                e = [Fraction(0)] * self.dim(1)
                e[idx[-1]] = Fraction(1)
                val = self.mul(len(idx) - 1, prev, 1, tuple(e))
            self._monomials[idx] = val
        return self._monomials[idx]

    def product_of_classes(self, classes: Sequence[Vector]) -> Vector:
        """Product of arbitrary degree-one classes."""
        deg, acc = 0, self.unit()
        for c in classes:
            acc = self.mul(deg, acc, 1, c)
            deg += 1
        return acc

    def to_dict(self) -> dict:
        prods = []
        for (a, b), vec in sorted(self._given.items(), key=lambda kv: (self.degree_of[kv[0][0]], self.index_of[kv[0][0]], self.degree_of[kv[0][1]], self.index_of[kv[0][1]])):
            d = self.degree_of[a] + self.degree_of[b]
            value = {self.basis[d][k]: _num(x) for k, x in enumerate(vec) if x}
            prods.append({"a": a, "b": b, "value": value})
        out = {
            "n": self.n,
            "basis": {str(d): list(self.basis[d]) for d in range(self.n + 1)},
            "products": prods,
        }
        std = all(self.lattice[d] == tuple(tuple(Fraction(int(i == j)) for j in range(self.dim(d))) for i in range(self.dim(d))) for d in range(self.n + 1))
        if not std:
            out["lattice"] = {str(d): [[_num(x) for x in r] for r in self.lattice[d]] for d in range(self.n + 1)}
        if self.torsion_exponents:
            out["torsion_exponents"] = {str(k): v for k, v in sorted(self.torsion_exponents.items())}
        return out

    # ------------------------------------------------------------ validation

    def violations(self) -> list[str]:
        out = []
        for (a, b), vec in sorted(self._given.items()):
            if (b, a) in self._given and (a, b) < (b, a):
                sign = -1 if self.degree_of[a] * self.degree_of[b] % 2 else 1
                if self._given[b, a] != tuple(sign * x for x in vec):
                    out.append(f"products: {a}*{b} and {b}*{a} violate graded commutativity")
            if a == b and self.degree_of[a] % 2 and any(vec):
                out.append(f"products: square of odd-degree {a} is nonzero")
            if UNIT in (a, b):
                other = b if a == UNIT else a
                if vec != self.basis_element(other)[1]:
                    out.append(f"products: {a}*{b} disagrees with the unit")
        names = [(d, x) for d in range(1, self.n + 1) for x in self.basis[d]]
        for (da, a), (db, b), (dc, c) in itertools.product(names, repeat=3):
            if da + db + dc > self.n:
                continue
            ab = self.basis_product(a, b)
            bc = self.basis_product(b, c)
            left = self.mul(da + db, ab, dc, self.basis_element(c)[1])
            right = self.mul(da, self.basis_element(a)[1], db + dc, bc)
            if left != right:
                out.append(f"associativity fails for ({a}*{b})*{c}")
        return out


def _num(x: Fraction):
    return x.numerator if x.denominator == 1 else str(x)


def ring_from_dict(data: Mapping, where: str = "ring") -> GradedRing:
    try:
        n = int(data["n"])
        basis = {int(k): list(v) for k, v in data["basis"].items()}
        products = data.get("products", [])
        if not isinstance(products, list):
            raise InvalidInput("products must be a list")
        for i, p in enumerate(products):
            for key in ("a", "b", "value"):
                if key not in p:
                    raise InvalidInput(f"products[{i}]: missing {key!r}")
        return GradedRing(n, basis, products, data.get("lattice"), data.get("torsion_exponents"))
    except KeyError as exc:
        raise InvalidInput(f"{where}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError, AttributeError) as exc:
        if isinstance(exc, InvalidInput):
            raise InvalidInput(f"{where}: {exc}") from None
        raise InvalidInput(f"{where}: malformed ring ({exc})") from None


def validate_ring(R: GradedRing) -> dict:
    v = R.violations()
    return {"valid": not v, "violations": v}


def require_valid(R: GradedRing) -> None:
    v = R.violations()
    if v:
        raise InvalidInput(v[0])


# ---------------------------------------------------------------- Poincare duality

def pairing_matrix(R: GradedRing, d: int) -> list[list[Fraction]]:
    """Rows indexed by the degree-``d`` basis, columns by degree ``n - d``; entries are top coefficients."""
    n = R.n
    rows = []
    for a in R.basis[d]:
        rows.append([R.basis_product(a, b)[0] if R.dim(n) == 1 else Fraction(0) for b in R.basis[n - d]])
    return rows


def poincare_duality_check(R: GradedRing) -> bool:
    if R.dim(R.n) != 1:
        return False
    for d in range(R.n + 1):
        if R.dim(d) != R.dim(R.n - d):
            return False
        if R.dim(d) and rank_q(pairing_matrix(R, d), R.dim(d)) != R.dim(d):
            return False
    return True


# ---------------------------------------------------------------- cup maps

@dataclass
class CupMap:
    degree: int
    # (j, index tuple) per source basis element
    source: list[tuple[int, tuple[int, ...]]]
    # columns are images in the degree-d basis
    columns: list[Vector]

    @property
    def target_dim(self) -> int:
        return len(self.columns[0]) if self.columns else 0

    def rows(self) -> list[list[Fraction]]:
        m = self.target_dim
        return [[c[i] for c in self.columns] for i in range(m)]

    @property
    def rank(self) -> int:
        if not self.columns or not self.target_dim:
            return 0
        return rank_q(self.rows(), len(self.columns))

    def is_surjective(self, dim_target: int) -> bool:
        return self.rank == dim_target


def cup_source(b1: int, d: int) -> list[tuple[int, tuple[int, ...]]]:
    out = []
    for j in range(d // 2 + 1):
        out += [(j, idx) for idx in itertools.combinations(range(b1), d - 2 * j)]
    return out


def _omega_powers(R: GradedRing, omega: Vector, up_to: int) -> list[Vector]:
    pw, acc = [], R.unit()
    for j in range(up_to + 1):
        pw.append(acc)
        acc = R.mul(2 * j, acc, 2, omega)
    return pw


def cup_map(R: GradedRing, omega: Sequence, d: int) -> CupMap:
    omega = R.element(2, omega) if R.n >= 2 else ()
    if not 0 <= d <= R.n:
        raise InvalidInput(f"degree {d} outside 0..{R.n}")
    src = cup_source(R.dim(1), d)
    pw = _omega_powers(R, omega, d // 2) if R.n >= 2 else [R.unit()]
    cols = []
    for j, idx in src:
        if j and R.n < 2:
            cols.append(R.zero(d))
            continue
        cols.append(R.mul(len(idx), R.monomial(idx), 2 * j, pw[j]))
    return CupMap(d, src, cols)


# ---------------------------------------------------------------- W1 / W2

@dataclass
class WlsVerdict:
    w1: bool
    w2: bool
    w1_witness: dict | None = None
    w2_witness: list[Fraction] | None = None
    poincare_duality: bool = False
    surjective_n_minus_1: bool | None = None
    surjective_n: bool | None = None

    @property
    def is_wls(self) -> bool:
        return self.w1 and self.w2

    def as_dict(self) -> dict:
        out = {"wls": self.is_wls, "w1": self.w1, "w2": self.w2}
        if self.w1_witness is not None:
            out["w1_witness"] = self.w1_witness
        if self.w2_witness is not None:
            out["w2_witness"] = [_num(x) for x in self.w2_witness]
        out["poincare_duality"] = self.poincare_duality
        if self.poincare_duality:
            out["surjective_n_minus_1"] = self.surjective_n_minus_1
            out["surjective_n"] = self.surjective_n
        return out


def _check_omega(R: GradedRing, omega) -> Vector:
    if R.n < 2:
        if omega and any(_frac(x) for x in omega):
            raise InvalidInput("omega: ring has no degree-2 part")
        return ()
    if len(omega) != R.dim(2):
        raise InvalidInput(f"omega: degree-2 class needs {R.dim(2)} coordinates, got {len(omega)}")
    return tuple(_frac(x) for x in omega)


def check_W1(R: GradedRing, omega: Sequence) -> tuple[bool, dict | None]:
    """Some ``alpha_1 ... alpha_r omega^k`` with ``r + 2k = n`` is nonzero.

    The witness lists ``r``, ``k`` and the degree-one basis classes used.
    """
    omega = _check_omega(R, omega)
    cm = cup_map(R, omega, R.n)
    for (j, idx), col in zip(cm.source, cm.columns):
        if any(col):
            return True, {"r": len(idx), "k": j, "classes": [R.basis[1][i] for i in idx]}
    return False, None


def w2_matrix(R: GradedRing, omega: Sequence) -> list[list[Fraction]]:
    """Rows: (source element of the degree ``n-1`` cup map, top coordinate); columns: ``H^1`` basis."""
    omega = _check_omega(R, omega)
    cm = cup_map(R, omega, R.n - 1) if R.n >= 1 else CupMap(0, [], [])
    b1 = R.dim(1)
    rows = []
    for col in cm.columns:
        prods = [R.mul(1, R.basis_element(R.basis[1][i])[1], R.n - 1, col) for i in range(b1)]
        for t in range(R.dim(R.n)):
            rows.append([p[t] for p in prods])
    return rows


def check_W2(R: GradedRing, omega: Sequence) -> tuple[bool, list[Fraction] | None]:
    """Every nonzero ``alpha`` in ``H^1`` pairs nontrivially with the degree ``n-1`` cup image."""
    b1 = R.dim(1)
    if b1 == 0:
        return True, None
    rows = w2_matrix(R, omega)
    ker = nullspace_q(rows, b1) if rows else [[Fraction(int(i == j)) for i in range(b1)] for j in range(b1)]
    if not ker:
        return True, None
    v = ker[0]
    den = lcm(*(x.denominator for x in v))
    return False, [x * den for x in v]


def is_wls_class(R: GradedRing, omega: Sequence) -> WlsVerdict:
    omega = _check_omega(R, omega)
    w1, wit1 = check_W1(R, omega)
    w2, wit2 = check_W2(R, omega)
    pd = poincare_duality_check(R)
    verdict = WlsVerdict(w1, w2, wit1, wit2, pd)
    if pd:
        s1 = cup_map(R, omega, R.n - 1).is_surjective(R.dim(R.n - 1)) if R.n >= 1 else True
        s2 = cup_map(R, omega, R.n).is_surjective(R.dim(R.n))
        verdict.surjective_n_minus_1, verdict.surjective_n = s1, s2
        if (s1 and s2) != (w1 and w2):
            raise AssertionError("W1 and W2 disagree with the surjectivity criterion on a Poincare duality ring")
    return verdict


def verify_w1_witness(R: GradedRing, omega: Sequence, witness: dict) -> bool:
    omega = _check_omega(R, omega)
    classes = [R.basis_element(c)[1] for c in witness["classes"]]
    prod = R.product_of_classes(classes)
    deg, pw = R.power(2, omega, witness["k"]) if witness["k"] else (0, R.unit())
    return any(R.mul(len(classes), prod, deg, pw))


def verify_w2_witness(R: GradedRing, omega: Sequence, alpha: Sequence) -> bool:
    """``alpha`` is nonzero and kills the whole degree ``n-1`` cup image."""
    if not any(alpha):
        return False
    cm = cup_map(R, omega, R.n - 1)
    a = tuple(_frac(x) for x in alpha)
    return all(not any(R.mul(1, a, R.n - 1, col)) for col in cm.columns)


# ---------------------------------------------------------------- search

@dataclass
class WlsClass:
    omega: list[Fraction]
    lam: list[Fraction]
    lam_lattice: list[int]
    scale: int
    attempts: int
    source: str
    verdict: WlsVerdict = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "omega": [_num(x) for x in self.omega],
            "lambda": [_num(x) for x in self.lam],
            "lambda_lattice": self.lam_lattice,
            "scale": self.scale,
            "attempts": self.attempts,
            "found_by": self.source,
            "verdict": self.verdict.as_dict(),
        }


def lattice_coordinates(R: GradedRing, d: int, v: Sequence) -> list[Fraction]:
    """Coordinates of ``v`` in the lattice basis of degree ``d``."""
    L = R.lattice[d]
    if not L:
        return []
    cols = [[L[i][j] for i in range(len(L))] for j in range(R.dim(d))]
    sol = solve_q(cols, len(L), list(v))
    assert sol is not None
    return sol


def from_lattice(R: GradedRing, d: int, coords: Sequence) -> Vector:
    L = R.lattice[d]
    if len(coords) != len(L):
        raise InvalidInput(f"lattice coordinates in degree {d} need {len(L)} entries")
    out = [Fraction(0)] * R.dim(d)
    for c, row in zip(coords, L):
        c = _frac(c)
        for k, x in enumerate(row):
            out[k] += c * x
    return tuple(out)


def integral_scale(R: GradedRing, omega: Sequence) -> tuple[int, list[Fraction], list[int]]:
    """Smallest ``r > 0`` with ``r omega`` in the lattice, plus ``r omega`` in both coordinate systems."""
    c = lattice_coordinates(R, 2, omega)
    r = lcm(1, *(x.denominator for x in c))
    return r, [r * _frac(x) for x in omega], [int(r * x) for x in c]


def find_wls_class(R: GradedRing, seed: int = 0, attempts: int = 500, height_bound: int = 10) -> WlsClass | None:
    """Seeded search for a rational WLS class.

    Random attempts draw coordinates ``p / q`` with ``|p|, q <= h`` where the
    height ``h`` ramps from 1 to ``height_bound``.  When ``b_2 <= 3`` the
    integer grid ``[-2, 2]^{b_2}`` is scanned afterwards.  ``None`` means
    the search failed, not that no class exists.
    """
    require_valid(R)
    if attempts < 0 or height_bound < 1:
        raise InvalidInput("attempts must be nonnegative and height_bound positive")
    b2 = R.dim(2)

    def found(omega, k, source):
        v = is_wls_class(R, omega)
        if not v.is_wls:
            return None
        r, lam, lam_lat = integral_scale(R, omega)
        return WlsClass(list(omega), lam, lam_lat, r, k, source, v)

    if b2 == 0:
        return found((), 1, "zero")
    rng = random.Random(seed)
    for k in range(attempts):
        h = 1 + (k * (height_bound - 1)) // max(attempts, 1)
        omega = tuple(Fraction(rng.randint(-h, h), rng.randint(1, h)) for _ in range(b2))
        res = found(omega, k + 1, "random")
        if res is not None:
            return res
    if b2 <= 3:
        for k, coords in enumerate(itertools.product(range(-2, 3), repeat=b2)):
            res = found(tuple(Fraction(c) for c in coords), attempts + k + 1, "grid")
            if res is not None:
                return res
    return None


# ---------------------------------------------------------------- integral invariants

def integral_cup_matrix(R: GradedRing, lam_lattice: Sequence[int], d: int) -> IntMatrix:
    """Cup map from products of lattice one-classes times ``lambda^j``, in lattice coordinates of ``H^d``."""
    lam = from_lattice(R, 2, lam_lattice) if R.n >= 2 else ()
    L1 = R.lattice[1]
    src = cup_source(len(L1), d)
    pw = _omega_powers(R, lam, d // 2) if R.n >= 2 else [R.unit()]
    cols = []
    for j, idx in src:
        prod = R.product_of_classes([L1[i] for i in idx])
        val = R.mul(len(idx), prod, 2 * j, pw[j]) if (j == 0 or R.n >= 2) else R.zero(d)
        c = lattice_coordinates(R, d, val)
        if any(x.denominator != 1 for x in c):
            raise InvalidInput(f"lattice: degree-{d} products of lattice classes are not integral")
        cols.append([int(x) for x in c])
    return IntMatrix.from_columns(cols, R.dim(d))


def delta_d(R: GradedRing, lam_lattice: Sequence, d: int) -> int | float:
    """Order of the cokernel of the integral cup map into ``H^d / Tor`` (``INF`` if infinite)."""
    if R.n >= 2 and len(lam_lattice) != R.dim(2):
        raise InvalidInput(f"lambda: needs {R.dim(2)} lattice coordinates")
    for x in lam_lattice:
        if _frac(x).denominator != 1:
            raise InvalidInput("lambda: lattice coordinates must be integers")
    if not 0 <= d <= R.n:
        raise InvalidInput(f"degree {d} outside 0..{R.n}")
    m = R.dim(d)
    if m == 0:
        return 1
    M = integral_cup_matrix(R, [int(_frac(x)) for x in lam_lattice], d)
    if M.cols == 0:
        return INF
    _, D, _ = smith_normal_form(M)
    diag = diagonal_of(D)
    nonzero = [x for x in diag if x]
    if len(nonzero) < m:
        return INF
    out = 1
    for x in nonzero:
        out *= x
    return out


def c3(R: GradedRing, lam_lattice: Sequence) -> int:
    if R.n < 1:
        raise InvalidInput("C3 needs top degree at least 1")
    a, b = delta_d(R, lam_lattice, R.n - 1), delta_d(R, lam_lattice, R.n)
    if a == INF:
        raise InvalidInput(f"delta_{R.n - 1} is infinite")
    if b == INF:
        raise InvalidInput(f"delta_{R.n} is infinite")
    return max(a, b)


def tau(R: GradedRing) -> tuple[int, list[str]]:
    """Largest ``r`` with a nonzero product of ``r`` degree-one classes, and a basis witness."""
    b1 = R.dim(1)
    for r in range(min(b1, R.n), 0, -1):
        for idx in itertools.combinations(range(b1), r):
            if any(R.monomial(idx)):
                return r, [R.basis[1][i] for i in idx]
    return 0, []


def discsym_bound(R: GradedRing) -> int:
    t, _ = tau(R)
    return min(R.n, (R.n + t) // 2)


def betti_report(R: GradedRing) -> dict:
    b = R.betti
    t, wit = tau(R)
    total = sum(b)
    report = {"betti": b, "sum": total, "tau": t, "tau_witness": wit, "sum_bound": 2**t, "sum_holds": total >= 2**t}
    if poincare_duality_check(R):
        idx = [R.index_of[w] for w in wit]
        per_j = []
        for j in range(t + 1):
            span = [R.monomial(sub) for sub in itertools.combinations(idx, j)]
            dim = rank_q(span, R.dim(j)) if R.dim(j) else 0
            per_j.append({"j": j, "betti": b[j], "binomial": comb(t, j), "span": dim, "holds": dim == comb(t, j) and b[j] >= comb(t, j)})
        report["per_degree"] = per_j
        report["per_degree_holds"] = all(x["holds"] for x in per_j)
    else:
        report["per_degree"] = None
        report["notice"] = "per-degree bound skipped: ring fails Poincare duality"
    report["holds"] = report["sum_holds"] and report.get("per_degree_holds", True)
    return report


def stabilizer_check(c3_value: int, n: int, G_order: int, Gx_order: int) -> bool:
    """``|G| <= C3 |G_x|^{n/2}``, compared as ``|G|^2 <= C3^2 |G_x|^n``."""
    for name, v in (("C3", c3_value), ("n", n), ("G_order", G_order), ("Gx_order", Gx_order)):
        if v <= 0:
            raise InvalidInput(f"{name} must be positive")
    return G_order**2 <= c3_value**2 * Gx_order**n


# ---------------------------------------------------------------- constructions

def _tensor_name(a: str, b: str) -> str:
    if a == UNIT and b == UNIT:
        return UNIT
    wrap = [f"({x})" if "⊗" in x or "#" in x else x for x in (a, b)]
    return "⊗".join(wrap)


def product_ring(R1: GradedRing, R2: GradedRing) -> GradedRing:
    """Tensor product with Koszul signs ``(a⊗b)(c⊗d) = (-1)^{|b||c|} ac⊗bd``."""
    n = R1.n + R2.n
    basis: dict[int, list[str]] = {d: [] for d in range(n + 1)}
    parts: dict[str, tuple[str, str]] = {}
    for d in range(n + 1):
        for d1 in range(max(0, d - R2.n), min(R1.n, d) + 1):
            for a in R1.basis[d1]:
                for b in R2.basis[d - d1]:
                    name = _tensor_name(a, b)
                    basis[d].append(name)
                    parts[name] = (a, b)
    index = {name: i for d in basis for i, name in enumerate(basis[d])}
    products = {}
    for x, (a, b) in parts.items():
        if x == UNIT:
            continue
        for y, (c, e) in parts.items():
            if y == UNIT:
                continue
            da, db, dc, de = R1.degree_of[a], R2.degree_of[b], R1.degree_of[c], R2.degree_of[e]
            if da + db + dc + de > n:
                continue
            ac = R1.basis_product(a, c)
            be = R2.basis_product(b, e)
            sign = -1 if db * dc % 2 else 1
            value = {}
            for i, u in enumerate(ac):
                if not u:
                    continue
                for j, v in enumerate(be):
                    if v:
                        value[_tensor_name(R1.basis[da + dc][i], R2.basis[db + de][j])] = sign * u * v
            if value:
                products[x, y] = value
    lattice = {}
    for d in range(n + 1):
        rows = []
        for d1 in range(max(0, d - R2.n), min(R1.n, d) + 1):
            for ra in R1.lattice[d1]:
                for rb in R2.lattice[d - d1]:
                    row = [Fraction(0)] * len(basis[d])
                    for i, u in enumerate(ra):
                        for j, v in enumerate(rb):
                            if u and v:
                                row[index[_tensor_name(R1.basis[d1][i], R2.basis[d - d1][j])]] += u * v
                    rows.append(row)
        lattice[d] = rows
    return GradedRing(n, basis, products, lattice)


def include_left(R1: GradedRing, R2: GradedRing, d: int, v: Vector, P: GradedRing) -> Vector:
    """Image of ``v`` (degree ``d`` in ``R1``) as ``v ⊗ 1`` in ``P = R1 x R2``."""
    out = [Fraction(0)] * P.dim(d)
    for i, x in enumerate(v):
        if x:
            out[P.index_of[_tensor_name(R1.basis[d][i], UNIT)]] += x
    return tuple(out)


def include_right(R1: GradedRing, R2: GradedRing, d: int, v: Vector, P: GradedRing) -> Vector:
    out = [Fraction(0)] * P.dim(d)
    for i, x in enumerate(v):
        if x:
            out[P.index_of[_tensor_name(UNIT, R2.basis[d][i])]] += x
    return tuple(out)


def wls_sum_check(R1: GradedRing, omega1: Sequence, R2: GradedRing, omega2: Sequence, seed: int = 0, random_samples: int = 3) -> dict:
    """Product of WLS classes is WLS, and the top-degree product identity holds exactly.

    For ``r_i + 2 t_i = n_i`` and degree-one classes on each factor,
    ``(alphas_1 omega_1^t1)(alphas_2 omega_2^t2)`` equals
    ``t1! t2! / (t1 + t2)!`` times ``alphas_1 alphas_2 (omega_1 + omega_2)^(t1 + t2)``.
    """
    o1, o2 = _check_omega(R1, omega1), _check_omega(R2, omega2)
    for i, (R, o) in enumerate(((R1, o1), (R2, o2)), 1):
        if not is_wls_class(R, o).is_wls:
            raise InvalidInput(f"omega{i} is not a WLS class of ring {i}")
    P = product_ring(R1, R2)
    omega = tuple(a + b for a, b in zip(
        include_left(R1, R2, 2, o1, P) if R1.n >= 2 else P.zero(2),
        include_right(R1, R2, 2, o2, P) if R2.n >= 2 else P.zero(2),
    )) if P.n >= 2 else ()
    verdict = is_wls_class(P, omega)
    rng = random.Random(seed)
    checked, failures = 0, []
    for t1 in range(R1.n // 2 + 1):
        r1 = R1.n - 2 * t1
        if r1 > R1.dim(1) and r1 > 0:
            continue
        for t2 in range(R2.n // 2 + 1):
            r2 = R2.n - 2 * t2
            if r2 > R2.dim(1) and r2 > 0:
                continue
            samples1 = _one_class_samples(R1, r1, rng, random_samples)
            samples2 = _one_class_samples(R2, r2, rng, random_samples)
            coeff = Fraction(factorial(t1) * factorial(t2), factorial(t1 + t2))
            for a1 in samples1:
                for a2 in samples2:
                    lhs1 = _alphas_omega(R1, a1, o1, t1)
                    lhs2 = _alphas_omega(R2, a2, o2, t2)
                    lhs = P.mul(R1.n, _embed_top(R1, R2, P, lhs1, True), R2.n, _embed_top(R1, R2, P, lhs2, False))
                    classes = [include_left(R1, R2, 1, a, P) for a in a1] + [include_right(R1, R2, 1, a, P) for a in a2]
                    prod = P.product_of_classes(classes)
                    deg, pw = P.power(2, omega, t1 + t2) if t1 + t2 else (0, P.unit())
                    rhs = tuple(coeff * x for x in P.mul(len(classes), prod, deg, pw))
                    checked += 1
                    if lhs != rhs:
                        failures.append({"t1": t1, "t2": t2})
    return {
        "product_wls": verdict.is_wls,
        "product_verdict": verdict.as_dict(),
        "identity_checked": checked,
        "identity_failures": failures,
        "holds": verdict.is_wls and not failures,
    }


def _one_class_samples(R: GradedRing, r: int, rng: random.Random, extra: int) -> list[list[Vector]]:
    b1 = R.dim(1)
    basis = [R.basis_element(x)[1] for x in R.basis.get(1, ())]
    out = [[basis[i] for i in idx] for idx in itertools.combinations(range(b1), r)]
    for _ in range(extra if b1 else 0):
        out.append([tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(b1)) for _ in range(r)])
    return out or [[]]


def _alphas_omega(R: GradedRing, alphas: Sequence[Vector], omega: Vector, t: int) -> Vector:
    prod = R.product_of_classes(alphas)
    if not t:
        return prod
    deg, pw = R.power(2, omega, t)
    return R.mul(len(alphas), prod, deg, pw)


def _embed_top(R1, R2, P, v, left: bool) -> Vector:
    if left:
        return include_left(R1, R2, R1.n, v, P)
    return include_right(R1, R2, R2.n, v, P)


# ---------------------------------------------------------------- model rings

def exterior_ring(k: int, names: Sequence[str] | None = None) -> GradedRing:
    """Cohomology of the torus ``T^k``: exterior algebra on ``k`` degree-one generators."""
    gens = list(names) if names else [f"x{i + 1}" for i in range(k)]

    def label(idx):
        return "".join(gens[i] for i in idx) if idx else UNIT

    basis = {d: [label(idx) for idx in itertools.combinations(range(k), d)] for d in range(k + 1)}
    products = {}
    for d1 in range(1, k + 1):
        for I in itertools.combinations(range(k), d1):
            for d2 in range(1, k + 1 - d1):
                for J in itertools.combinations(range(k), d2):
                    if set(I) & set(J):
                        continue
                    seq = list(I) + list(J)
                    inversions = sum(1 for a in range(len(seq)) for b in range(a + 1, len(seq)) if seq[a] > seq[b])
                    products[label(I), label(J)] = {label(tuple(sorted(seq))): (-1) ** inversions}
    return GradedRing(k, basis, products)


def projective_ring(m: int, name: str = "w") -> GradedRing:
    """Cohomology of ``CP^m``: truncated polynomial ring on a degree-two class."""
    def label(i):
        return UNIT if i == 0 else (name if i == 1 else f"{name}^{i}")

    basis = {d: ([label(d // 2)] if d % 2 == 0 else []) for d in range(2 * m + 1)}
    products = {}
    for i in range(1, m + 1):
        for j in range(1, m + 1 - i):
            products[label(i), label(j)] = {label(i + j): 1}
    return GradedRing(2 * m, basis, products)


def sphere_ring(n: int, name: str = "s") -> GradedRing:
    basis = {d: [] for d in range(n + 1)}
    basis[0] = [UNIT]
    if n:
        basis[n] = [name]
    return GradedRing(n, basis, {})


def point_ring() -> GradedRing:
    return GradedRing(0, {0: [UNIT]}, {})


def s1_x_s3() -> GradedRing:
    return product_ring(sphere_ring(1, "x"), sphere_ring(3, "y"))


def rescaled_torus2() -> GradedRing:
    """``T^2`` over Q with the degree-two lattice generator ``g`` and ``x1 x2 = 2 g``."""
    return GradedRing(2, {0: [UNIT], 1: ["x1", "x2"], 2: ["g"]}, {("x1", "x2"): {"g": 2}})


def connected_sum(R1: GradedRing, R2: GradedRing) -> GradedRing:
    """Connected sum of two Poincare duality rings of the same dimension ``n >= 2``.

    Middle degrees are direct sums with cross products zero; both top
    classes are identified with a single generator.
    """
    n = R1.n
    if R2.n != n or n < 2:
        raise InvalidInput("connected sum needs rings of equal dimension at least 2")
    if not (poincare_duality_check(R1) and poincare_duality_check(R2)):
        raise InvalidInput("connected sum needs Poincare duality rings")
    ren = [{}, {}]
    basis = {0: [UNIT], n: ["top"]}
    for d in range(1, n):
        basis[d] = []
        for s, R in enumerate((R1, R2)):
            for x in R.basis[d]:
                ren[s][x] = f"{x}#{s + 1}"
                basis[d].append(ren[s][x])
    products = {}
    for s, R in enumerate((R1, R2)):
        for d1 in range(1, n):
            for a in R.basis[d1]:
                for d2 in range(1, n - d1 + 1):
                    for b in R.basis[d2]:
                        vec = R.basis_product(a, b)
                        d = d1 + d2
                        if d == n:
                            value = {"top": vec[0]} if vec[0] else {}
                        else:
                            value = {ren[s][R.basis[d][k]]: c for k, c in enumerate(vec) if c}
                        if value:
                            products[ren[s][a], ren[s][b]] = value
    return GradedRing(n, basis, products)


def change_basis(R: GradedRing, matrices: Mapping[int, Sequence[Sequence[int]]]) -> GradedRing:
    """Re-express ``R`` in a new basis; column ``i`` of ``matrices[d]`` is new element ``i`` in old coordinates.

    Lattices are transported so the same integral structure is described.
    """
    P, Pinv = {}, {}
    for d in range(R.n + 1):
        m = R.dim(d)
        M = matrices.get(d)
        if M is None or d == 0:
            M = [[int(i == j) for j in range(m)] for i in range(m)]
        cols = [[Fraction(M[i][j]) for i in range(m)] for j in range(m)]
        if m and rank_q(cols, m) != m:
            raise InvalidInput(f"change of basis in degree {d} is singular")
        P[d] = M
        inv_cols = []
        for k in range(m):
            e = [Fraction(int(i == k)) for i in range(m)]
            inv_cols.append(solve_q([[Fraction(x) for x in row] for row in M], m, e))
        Pinv[d] = inv_cols  # inv_cols[k] = old basis vector k in new coordinates

    def to_new(d, old_vec):
        out = [Fraction(0)] * R.dim(d)
        for k, x in enumerate(old_vec):
            if x:
                for i, y in enumerate(Pinv[d][k]):
                    out[i] += x * y
        return out

    names = {d: (list(R.basis[d]) if d == 0 else [f"e{d}_{i + 1}" for i in range(R.dim(d))]) for d in range(R.n + 1)}
    products = {}
    for d1 in range(1, R.n + 1):
        for d2 in range(1, R.n + 1 - d1):
            for i in range(R.dim(d1)):
                u = tuple(Fraction(P[d1][k][i]) for k in range(R.dim(d1)))
                for j in range(R.dim(d2)):
                    v = tuple(Fraction(P[d2][k][j]) for k in range(R.dim(d2)))
                    w = to_new(d1 + d2, R.mul(d1, u, d2, v))
                    value = {names[d1 + d2][k]: c for k, c in enumerate(w) if c}
                    if value:
                        products[names[d1][i], names[d2][j]] = value
    lattice = {d: [to_new(d, row) for row in R.lattice[d]] for d in range(R.n + 1)}
    return GradedRing(R.n, names, products, lattice)


def random_pd_ring(rng: random.Random, max_dim: int = 4) -> GradedRing:
    """Random Poincare duality ring from products and connected sums of model pieces, in a random basis."""
    n = rng.randint(2, max_dim)

    def piece(k):
        options = [lambda: exterior_ring(k), lambda: sphere_ring(k)]
        if k % 2 == 0:
            options.append(lambda: projective_ring(k // 2))
        if k >= 2:
            a = rng.randint(1, k - 1)
            options.append(lambda: product_ring(piece(a), piece(k - a)))
        return rng.choice(options)()

    R = piece(n)
    if rng.random() < 0.4:
        R = connected_sum(R, piece(n))
    mats = {}
    for d in range(1, R.n):
        m = R.dim(d)
        mats[d] = _random_unimodular(rng, m)
    return change_basis(R, mats)


def _random_unimodular(rng: random.Random, m: int) -> list[list[int]]:
    M = [[int(i == j) for j in range(m)] for i in range(m)]
    for _ in range(2 * m):
        if m < 2:
            break
        i, j = rng.sample(range(m), 2)
        c = rng.choice((-1, 1))
        for r in range(m):
            M[r][j] += c * M[r][i]
    if m:
        perm = list(range(m))
        rng.shuffle(perm)
        M = [[M[r][perm[c]] for c in range(m)] for r in range(m)]
    return M
