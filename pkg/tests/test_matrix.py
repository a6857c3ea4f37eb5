from fractions import Fraction

from hypothesis import given, settings, strategies as st
from oracles import sympy_invariants, sympy_rank
from sympy import Matrix

from wlskit.matrix import IntMatrix, QSubspace, diagonal_of, nullspace_q, rank_q, rref, smith_normal_form, solve_q


@st.composite
def int_matrices(draw, max_dim=6, lo=-20, hi=20):
    m = draw(st.integers(0, max_dim))
    n = draw(st.integers(0, max_dim))
    return IntMatrix(m, n, [[draw(st.integers(lo, hi)) for _ in range(n)] for _ in range(m)])


def check_snf(M: IntMatrix):
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    for i in range(D.rows):
        for j in range(D.cols):
            if i != j:
                assert D[i, j] == 0
    diag = diagonal_of(D)
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)
    return diag


def test_snf_identity():
    U, D, V = smith_normal_form(IntMatrix.identity(2))
    assert U == D == V == IntMatrix.identity(2)


def test_snf_two_by_two_example():
    diag = check_snf(IntMatrix.from_rows([[2, 4], [6, 8]]))
    # gcd of entries is 2 and |det| is 8, so the second invariant is 4
    assert diag == [2, 4] == sympy_invariants([[2, 4], [6, 8]], 2, 2)


def test_snf_zero_matrix():
    U, D, V = smith_normal_form(IntMatrix.zeros(3, 2))
    assert D.is_zero() and U @ IntMatrix.zeros(3, 2) @ V == D


@given(int_matrices())
@settings(max_examples=300, deadline=None)
def test_snf_matches_sympy(M):
    diag = check_snf(M)
    assert [x for x in diag if x] == sympy_invariants(M.tolist(), M.rows, M.cols)


@given(int_matrices(max_dim=5, lo=-5, hi=5))
@settings(max_examples=200, deadline=None)
def test_rank_matches_sympy(M):
    assert rank_q(M.tolist(), M.cols) == sympy_rank(M.tolist(), M.rows, M.cols)


@given(int_matrices(max_dim=5, lo=-5, hi=5))
@settings(max_examples=200, deadline=None)
def test_rref_matches_sympy(M):
    if not M.rows or not M.cols:
        return
    R, pivots = rref(M.tolist(), M.cols)
    S, spiv = Matrix(M.tolist()).rref()
    assert tuple(pivots) == tuple(spiv)
    for i, row in enumerate(R):
        assert [Fraction(int(S[i, j].p), int(S[i, j].q)) for j in range(M.cols)] == row


@given(int_matrices(max_dim=5, lo=-5, hi=5))
@settings(max_examples=200, deadline=None)
def test_nullspace_is_kernel_of_full_dimension(M):
    N = nullspace_q(M.tolist(), M.cols)
    assert len(N) == M.cols - sympy_rank(M.tolist(), M.rows, M.cols)
    for v in N:
        assert all(sum(Fraction(a) * b for a, b in zip(row, v)) == 0 for row in M.tolist())


@given(int_matrices(max_dim=4, lo=-4, hi=4), st.lists(st.integers(-4, 4), min_size=4, max_size=4))
@settings(max_examples=200, deadline=None)
def test_solve_q_solutions_are_exact(M, x):
    if not M.rows or not M.cols:
        return
    b = M.apply(x[: M.cols])
    sol = solve_q(M.tolist(), M.cols, b)
    assert sol is not None
    assert tuple(sum(Fraction(a) * s for a, s in zip(row, sol)) for row in M.tolist()) == tuple(b)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), max_size=3),
       st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), max_size=3))
@settings(max_examples=200, deadline=None)
def test_subspace_dimension_formula(a, b):
    A, B = QSubspace(4, a), QSubspace(4, b)
    assert (A + B).dim + A.intersect(B).dim == A.dim + B.dim
    for v in A.intersect(B).basis:
        assert A.contains(v) and B.contains(v)
