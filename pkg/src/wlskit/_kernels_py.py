"""Pure-Python integer reduction kernels.

These are the reference implementations; the compiled module ``_kernels``
mirrors them operation for operation, so both backends return identical
transforms for identical input.

Matrices travel as lists of lists of Python ints.
"""

from __future__ import annotations

BACKEND = "python"


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith(rows, nrows, ncols):
    """Smith normal form with transforms.

    Returns ``(U, D, V)`` with ``U * M * V == D``.  Pivots are chosen as the
    nonzero entry of smallest absolute value (first in row-major order), so
    the transforms are deterministic.
    """
    A = [list(r) for r in rows]
    U = _identity(nrows)
    V = _identity(ncols)
    m, n = nrows, ncols
    t = 0
    while t < m and t < n:
        best = 0
        bi = bj = -1
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                a = Ai[j]
                if a:
                    a = a if a > 0 else -a
                    if best == 0 or a < best:
                        best, bi, bj = a, i, j
        if best == 0:
            break
        while True:
            if bi != t:
                A[t], A[bi] = A[bi], A[t]
                U[t], U[bi] = U[bi], U[t]
            if bj != t:
                for R in A:
                    R[t], R[bj] = R[bj], R[t]
                for R in V:
                    R[t], R[bj] = R[bj], R[t]
            p = A[t][t]
            At = A[t]
            Ut = U[t]
            for i in range(t + 1, m):
                a = A[i][t]
                if a:
                    q = a // p
                    if q:
                        Ai = A[i]
                        for j in range(t, n):
                            Ai[j] -= q * At[j]
                        Ui = U[i]
                        for j in range(m):
                            Ui[j] -= q * Ut[j]
            for j in range(t + 1, n):
                a = At[j]
                if a:
                    q = a // p
                    if q:
                        for i in range(t, m):
                            A[i][j] -= q * A[i][t]
                        for R in V:
                            R[j] -= q * R[t]
            # any leftover in the pivot row/column is smaller than |p|
            best = 0
            bi = bj = -1
            for i in range(t + 1, m):
                a = A[i][t]
                if a:
                    a = a if a > 0 else -a
                    if best == 0 or a < best:
                        best, bi, bj = a, i, t
            for j in range(t + 1, n):
                a = At[j]
                if a:
                    a = a if a > 0 else -a
                    if best == 0 or a < best:
                        best, bi, bj = a, t, j
            if best:
                continue
            bad = -1
            for i in range(t + 1, m):
                Ai = A[i]
                for j in range(t + 1, n):
                    if Ai[j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            Ab = A[bad]
            for j in range(t, n):
                At[j] += Ab[j]
            Ub = U[bad]
            for j in range(m):
                Ut[j] += Ub[j]
            bi, bj = t, t
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V


def echelon(rows, ncols, transform=False):
    """Row Hermite normal form of the lattice spanned by ``rows``.

    Returns ``(H, T)`` where ``H`` lists the nonzero rows of the HNF (pivot
    columns strictly increasing, positive pivots, entries above a pivot
    reduced into ``[0, pivot)``).  When ``transform`` is true, ``T`` is a
    unimodular matrix with ``T * G`` equal to ``H`` followed by zero rows, so
    ``T[len(H):]`` is a basis of the integer left kernel of ``G``.
    Otherwise ``T`` is ``None``.
    """
    H = [list(r) for r in rows]
    k = len(H)
    T = _identity(k) if transform else None
    r = 0
    for c in range(ncols):
        if r >= k:
            break
        while True:
            best = 0
            bi = -1
            for i in range(r, k):
                a = H[i][c]
                if a:
                    a = a if a > 0 else -a
                    if best == 0 or a < best:
                        best, bi = a, i
            if best == 0:
                break
            if bi != r:
                H[r], H[bi] = H[bi], H[r]
                if T is not None:
                    T[r], T[bi] = T[bi], T[r]
            Hr = H[r]
            p = Hr[c]
            done = True
            for i in range(r + 1, k):
                a = H[i][c]
                if a:
                    q = a // p
                    Hi = H[i]
                    for j in range(c, ncols):
                        Hi[j] -= q * Hr[j]
                    if T is not None:
                        Ti, Tr = T[i], T[r]
                        for j in range(k):
                            Ti[j] -= q * Tr[j]
                    if Hi[c]:
                        done = False
            if done:
                break
        if best == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            if T is not None:
                T[r] = [-x for x in T[r]]
        Hr = H[r]
        p = Hr[c]
        for i in range(r):
            a = H[i][c]
            if a < 0 or a >= p:
                q = a // p
                Hi = H[i]
                for j in range(c, ncols):
                    Hi[j] -= q * Hr[j]
                if T is not None:
                    Ti, Tr = T[i], T[r]
                    for j in range(k):
                        Ti[j] -= q * Tr[j]
        r += 1
    return H[:r], T
