import random

import pytest
from hypothesis import given, settings, strategies as st
from oracles import sympy_invariants, sympy_rank
from sympy import Matrix, zeros

from wlskit.abelian import Morphism, Presentation
from wlskit.complexes import (
    ChainMap,
    CochainComplex,
    betti_numbers,
    cohomology,
    inclusion_naturality,
    is_dQ_zero,
    lattice_inclusion,
    torsion_comparison,
)
from wlskit.matrix import IntMatrix, InvalidInput
from wlskit.random_models import random_complex, random_dq_zero_complex, random_filtered_complex
from wlskit.spectral import (
    circle_complex,
    FilteredComplex,
    FilteredMap,
    convergence_check,
    degeneracy_bound,
    degeneracy_certificate,
    degenerates_at_E2_Q,
    hopf_model,
    image_divisibility,
    nonzero_rational_differentials,
    page_inclusion,
    product_of_circles,
    recomputation_check,
    spectral_pages,
    tensor_filtered,
    verify_tensoring_Q,
)

Z = Presentation.free(1)


def chain(groups, diffs, kmin=0):
    return CochainComplex(kmin, groups, diffs)


# ---------------------------------------------------------------- cohomology

def test_zero_differentials_give_the_groups():
    C = chain([Presentation.cyclic(8), Presentation.free(2)], [[[0], [0]]])
    H = cohomology(C)
    assert H[0].canonical == (0, (8,)) and H[1].canonical == (2, ())


def test_multiplication_by_n():
    H = cohomology(chain([Z, Z], [[[5]]]))
    assert H[0].canonical == (0, ()) and H[1].canonical == (0, (5,))


def test_d_squared_validated():
    with pytest.raises(InvalidInput, match=r"differentials\[0\]"):
        chain([Z, Z, Z], [[[1]], [[1]]])


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_free_cohomology_matches_rank_nullity_and_smith(seed):
    rng = random.Random(seed)
    C = random_complex(rng, length=3, max_rank=4, torsion=False)
    H = cohomology(C)
    for k in C.degrees:
        n = C.group(k).generators
        rk_out = sympy_rank(C.d(k).matrix.tolist(), C.d(k).matrix.rows, n)
        prev = C.d(k - 1).matrix
        rk_in = sympy_rank(prev.tolist(), prev.rows, prev.cols)
        assert H[k].rank == n - rk_out - rk_in
        torsion = [x for x in sympy_invariants(prev.tolist(), prev.rows, prev.cols) if x > 1]
        assert list(H[k].torsion) == torsion


# ---------------------------------------------------------------- d_Q = 0 lemmas

def test_is_dQ_zero_examples():
    assert is_dQ_zero(chain([Z, Z], [[[3]]]))[0] is False
    assert is_dQ_zero(chain([Z, Presentation.cyclic(4)], [[[1]]]))[0] is True


@given(st.integers(0, 10**6))
@settings(max_examples=100, deadline=None)
def test_is_dQ_zero_matches_rank_oracle(seed):
    C = random_complex(random.Random(seed), length=3, max_rank=3, torsion=True)
    flags = is_dQ_zero(C)
    for k in C.degrees:
        if k == C.kmax:
            continue
        R = C.group(k + 1).relations
        D = C.d(k).matrix
        both = R.hstack(D) if R.cols else D
        rk_R = sympy_rank(R.tolist(), R.rows, R.cols) if R.cols else 0
        rk_both = sympy_rank(both.tolist(), both.rows, both.cols) if both.cols else 0
        # d(C^k) lies in the rational span of the relations exactly when d_Q = 0
        assert flags[k] == (rk_both == rk_R)


def test_torsion_comparison_examples():
    C = chain([Presentation.cyclic(8)], [])
    r = torsion_comparison(C)[0]
    assert r["exp_tor_H"] == 8 == r["exp_tor_C"] and r["holds"]
    C = chain([Z, Presentation.cyclic(2)], [[[1]]])
    r = torsion_comparison(C)[1]
    assert r["exp_tor_H"] == 1 and r["exp_tor_C"] == 2 and r["holds"]
    with pytest.raises(InvalidInput):
        torsion_comparison(chain([Z, Z], [[[2]]]))


def test_lattice_inclusion_examples():
    li = lattice_inclusion(chain([Z, Z], [[[0]]]), 0)
    assert li.exponent == 1 and li.holds
    li = lattice_inclusion(chain([Z, Presentation.cyclic(3)], [[[1]]]), 0)
    assert li.exponent == 3 == li.bound and li.holds


@given(st.integers(0, 10**6), st.integers(1, 4))
@settings(max_examples=100, deadline=None)
def test_dq_zero_bounds_and_naturality(seed, c):
    C = random_dq_zero_complex(random.Random(seed))
    assert all(v["holds"] for v in torsion_comparison(C).values())
    f = ChainMap(C, C, {k: IntMatrix.identity(C.group(k).generators).scale(c) for k in C.degrees})
    for k in C.degrees:
        assert lattice_inclusion(C, k).holds
        assert inclusion_naturality(f, k)


# ---------------------------------------------------------------- spectral pages

def _e_infinity_oracle(FC: FilteredComplex) -> dict:
    """Rational ``dim F^p H^n / F^{p+1} H^n`` for a free complex, via sympy."""
    C = FC.complex
    out = {}
    for n in C.degrees:
        N = C.group(n).generators
        d = Matrix(C.d(n).matrix.tolist()) if C.d(n).matrix.rows else zeros(0, N)
        prev = C.d(n - 1).matrix
        B = Matrix(prev.tolist()) if prev.cols and prev.rows else zeros(N, 0)
        rank_B = B.rank() if B.cols else 0

        def filtered_dim(p):
            gens = FC.generators(p, n) if p <= FC.length else []
            if not gens or N == 0:
                return 0
            G = Matrix(gens).T
            K = (d * G).nullspace() if d.rows else [Matrix.eye(G.cols)[:, j] for j in range(G.cols)]
            if not K:
                return 0
            cyc = G * Matrix.hstack(*K)
            both = Matrix.hstack(cyc, B) if B.cols else cyc
            return both.rank() - rank_B

        for p in range(FC.length + 1):
            out[(p, n - p)] = filtered_dim(p) - filtered_dim(p + 1)
    return out


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_e_infinity_matches_sympy_filtration_oracle(seed):
    FC = random_filtered_complex(random.Random(seed), torsion=False)
    expected = _e_infinity_oracle(FC)
    zpage = FC.pages("Z")[FC.last_page]
    qpage = FC.pages("Q")[FC.last_page]
    for cell, dim in expected.items():
        assert zpage.entry(*cell).rank == dim
        assert qpage.dim(*cell) == dim


def test_trivial_filtration_gives_cohomology_in_column_zero():
    rng = random.Random(3)
    C = random_complex(rng, length=3, max_rank=3)
    filt = {k: [[[int(i == j) for i in range(C.group(k).generators)] for j in range(C.group(k).generators)]] for k in C.degrees}
    FC = FilteredComplex(C, filt)
    H = cohomology(C)
    E2 = spectral_pages(FC)[0]
    for q in C.degrees:
        assert E2.entry(0, q).canonical == H[q].canonical
    assert not nonzero_rational_differentials(FC, "Z")
    assert verify_tensoring_Q(FC)["holds"]


def test_hopf_model():
    FC = hopf_model()
    E2 = spectral_pages(FC)[0]
    assert {c for c in FC.cells if not E2.entry(*c).is_trivial()} == {(0, 0), (0, 1), (2, 0), (2, 1)}
    d = E2.differentials[(0, 1)]
    assert d.target.canonical == (1, ()) and d.is_isomorphism()
    E3 = spectral_pages(FC)[1]
    assert {c for c in FC.cells if not E3.entry(*c).is_trivial()} == {(0, 0), (2, 1)}
    assert betti_numbers(FC.complex) == {0: 1, 1: 0, 2: 0, 3: 1}
    assert degenerates_at_E2_Q(FC) is False
    assert nonzero_rational_differentials(FC) == [(2, 0, 1)]
    assert convergence_check(FC)["holds"] and verify_tensoring_Q(FC)["holds"]


def test_product_of_circles():
    FC = product_of_circles()
    assert degenerates_at_E2_Q(FC)
    E2 = spectral_pages(FC)[0]
    profile = {}
    for (p, q) in FC.cells:
        profile[p + q] = profile.get(p + q, 0) + E2.entry(p, q).rank
    assert [profile.get(n, 0) for n in range(3)] == [1, 2, 1]
    assert convergence_check(FC)["betti"] == {0: 1, 1: 2, 2: 1}


def test_filtration_validated():
    C = chain([Z, Z], [[[1]]])
    with pytest.raises(InvalidInput):
        FilteredComplex(C, {0: [[[1]], [[1]]], 1: [[[1]], []]})  # d(F^1) not in F^1
    with pytest.raises(InvalidInput):
        FilteredComplex(C, {0: [[[1]], []], 1: [[[2]], []]})  # F^0 must be the whole group


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_page_invariants_on_random_complexes(seed):
    FC = random_filtered_complex(random.Random(seed))
    assert convergence_check(FC)["holds"]
    assert verify_tensoring_Q(FC)["holds"]
    assert recomputation_check(FC)["holds"]
    for page in FC.pages("Z")[2:]:
        r = page.r
        for (p, q), d in page.differentials.items():
            nxt = page.differentials.get((p + r, q - r + 1))
            if nxt is not None:
                assert nxt.compose(d).is_zero()
    E2, Einf = FC.pages("Q")[2], FC.pages("Q")[FC.last_page]
    same = all(E2.dim(*c) == Einf.dim(*c) for c in FC.cells)
    assert degenerates_at_E2_Q(FC) == same


# ---------------------------------------------------------------- page inclusions

def test_page_inclusion_identity_for_zero_differentials():
    FC = product_of_circles()
    for cell, entry in page_inclusion(FC, FC.last_page).items():
        assert entry["exponent"] == 1 and entry["holds"]


def test_page_inclusion_torsion_target():
    # x in filtration 0 maps onto y in Z/3 sitting in filtration 2: d_2 is zero over Q
    C = chain([Z, Presentation.cyclic(3)], [[[1]]])
    FC = FilteredComplex(C, {0: [[[1]], [], []], 1: [[[1]], [[1]], [[1]]]})
    assert not nonzero_rational_differentials(FC)
    entry = page_inclusion(FC, 3)[(0, 0)]
    assert entry["exponent"] == 3 and entry["holds"]
    assert 3 % entry["exponent"] == 0


def test_page_inclusion_rejects_rational_differentials():
    with pytest.raises(InvalidInput, match=r"d_2\^\{0,1\}"):
        page_inclusion(hopf_model(), 3)


@given(st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_page_inclusion_bounds_on_degenerate_complexes(seed):
    FC = random_filtered_complex(random.Random(seed))
    if not degenerates_at_E2_Q(FC):
        return
    for k in range(2, FC.last_page + 1):
        report = page_inclusion(FC, k, c_x=1, c_const=1)
        assert all(v["holds"] and v["injective"] for v in report.values())


# ---------------------------------------------------------------- image divisibility and bounds

def _cover_model(n):
    """Base circle with one cell per degree, crossed with a circle; the base cover multiplies by n."""
    base = chain([Z, Z], [[[0]]])
    FC = tensor_filtered(base, circle_complex())
    maps = {}
    for k in FC.complex.degrees:
        entries = []
        for i in range(0, 2):
            fibre = 2 if 0 <= k - i <= 1 else 0
            entries += [n**i] * fibre
        maps[k] = IntMatrix.diagonal(entries)
    return FC, FilteredMap(FC, FC, maps)


def test_image_divisibility_identity():
    FC = product_of_circles()
    f = FilteredMap(FC, FC, {k: IntMatrix.identity(FC.complex.group(k).generators) for k in FC.complex.degrees})
    assert all(image_divisibility(f, 1, p)["holds"] for p in range(FC.length + 1))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_image_divisibility_cover(n):
    FC, f = _cover_model(n)
    for p in range(FC.length + 1):
        assert image_divisibility(f, n, p)["holds"]
    assert not image_divisibility(f, n + 1, 1)["holds"]


def test_filtered_map_must_preserve_filtration():
    FC = hopf_model()
    swap = {0: [[1]], 1: [[0]], 2: [[0]], 3: [[0]]}
    FilteredMap(FC, FC, swap)
    C = chain([Presentation.free(2)], [])
    FC2 = FilteredComplex(C, {0: [[[1, 0], [0, 1]], [[1, 0]]]})
    with pytest.raises(InvalidInput):
        FilteredMap(FC2, FC2, {0: [[0, 0], [1, 0]]})


def test_degeneracy_bound_examples():
    assert degeneracy_bound(1, 0, 0, 2, 1, 1, 1) == (1, 1, 1)
    assert degeneracy_bound(6, 0, 0, 2, 1, 1, 1) == (36, 36, 36)
    assert degeneracy_bound(10, 1, 0, 2, 4, 2, 5) == (250, 25, 5)
    with pytest.raises(InvalidInput):
        degeneracy_bound(0, 1, 0, 2, 4, 2, 5)


def test_degeneracy_bound_not_monotone_in_n_itself():
    # exp_iota_high = 16 absorbs n = 4 completely but not n = 3
    assert degeneracy_bound(3, 0, 0, 2, 16, 1, 1)[2] > degeneracy_bound(4, 0, 0, 2, 16, 1, 1)[2]


@given(st.integers(1, 12), st.integers(2, 3), st.integers(0, 3), st.integers(2, 4), st.integers(1, 12), st.integers(1, 12), st.integers(1, 12))
@settings(max_examples=300, deadline=None)
def test_degeneracy_bound_grows_along_multiples(n, m, p, k, a, b, c):
    small = degeneracy_bound(n, p, 0, k, a, b, c)[2]
    large = degeneracy_bound(n * m, p, 0, k, a, b, c)[2]
    assert large % small == 0
    assert large * a * b * c >= (n * m) ** k


@given(st.integers(2, 6), st.integers(0, 3), st.integers(2, 4), st.integers(1, 12), st.integers(1, 12), st.integers(1, 12))
@settings(max_examples=100, deadline=None)
def test_degeneracy_bound_diverges(base, p, k, a, b, c):
    first = degeneracy_bound(base, p, 0, k, a, b, c)[2]
    far = degeneracy_bound(base**12, p, 0, k, a, b, c)[2]
    assert far > first


def test_degeneracy_certificate_on_hopf():
    cert = degeneracy_certificate(hopf_model(), 2, [1, 2, 3])
    assert cert["cells"][(0, 1)]["content"] == 1
    assert cert["cells"][(0, 1)]["divides"] == [True, False, False]
