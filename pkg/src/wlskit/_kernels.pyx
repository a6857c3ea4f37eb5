# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer reduction kernels (int64 with overflow detection).

Operation-for-operation mirror of ``_kernels_py``.  Any intermediate value
leaving the int64 range raises ``OverflowError``; the dispatcher in
``wlskit.kernels`` then reruns the pure-Python kernel on the same input.
"""

from libc.stdlib cimport malloc, free

cdef extern from *:
    """
    static inline int wls_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int wls_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    static inline int wls_add_ovf(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    """
    int wls_mul_ovf(long long a, long long b, long long *r) nogil
    int wls_sub_ovf(long long a, long long b, long long *r) nogil
    int wls_add_ovf(long long a, long long b, long long *r) nogil

BACKEND = "cython"

cdef long long LIMIT = 4611686018427387903  # 2**62 - 1; keeps negation and abs safe


cdef inline long long floordiv(long long a, long long b) nogil:
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline long long absll(long long a) nogil:
    return -a if a < 0 else a


cdef int axpy(long long *dst, long long *src, long long q, Py_ssize_t lo, Py_ssize_t hi) nogil:
    # dst[lo:hi] -= q * src[lo:hi]; returns 1 on overflow
    cdef Py_ssize_t j
    cdef long long prod, res
    for j in range(lo, hi):
        if src[j] == 0:
            continue
        if wls_mul_ovf(q, src[j], &prod):
            return 1
        if wls_sub_ovf(dst[j], prod, &res):
            return 1
        if res > LIMIT or res < -LIMIT:
            return 1
        dst[j] = res
    return 0


cdef long long* load(rows, Py_ssize_t m, Py_ssize_t n) except NULL:
    cdef long long *buf = <long long*> malloc(max(m * n, 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j
    try:
        for i in range(m):
            r = rows[i]
            for j in range(n):
                v = r[j]
                if v > LIMIT or v < -LIMIT:
                    raise OverflowError("entry exceeds int64 kernel range")
                buf[i * n + j] = v
    except BaseException:
        free(buf)
        raise
    return buf


cdef long long* ident(Py_ssize_t n) except NULL:
    cdef long long *buf = <long long*> malloc(max(n * n, 1) * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n * n):
        buf[i] = 0
    for i in range(n):
        buf[i * n + i] = 1
    return buf


cdef list dump(long long *buf, Py_ssize_t m, Py_ssize_t n):
    cdef Py_ssize_t i, j
    return [[buf[i * n + j] for j in range(n)] for i in range(m)]


cdef inline void swap_rows(long long *a, Py_ssize_t n, Py_ssize_t i, Py_ssize_t k) nogil:
    cdef Py_ssize_t j
    cdef long long tmp
    for j in range(n):
        tmp = a[i * n + j]
        a[i * n + j] = a[k * n + j]
        a[k * n + j] = tmp


cdef inline void swap_cols(long long *a, Py_ssize_t m, Py_ssize_t n, Py_ssize_t i, Py_ssize_t k) nogil:
    cdef Py_ssize_t r
    cdef long long tmp
    for r in range(m):
        tmp = a[r * n + i]
        a[r * n + i] = a[r * n + k]
        a[r * n + k] = tmp


cdef int col_axpy(long long *a, Py_ssize_t m, Py_ssize_t n, Py_ssize_t dst, Py_ssize_t src,
                  long long q, Py_ssize_t lo) nogil:
    # column dst -= q * column src over rows lo..m-1
    cdef Py_ssize_t r
    cdef long long prod, res
    for r in range(lo, m):
        if a[r * n + src] == 0:
            continue
        if wls_mul_ovf(q, a[r * n + src], &prod):
            return 1
        if wls_sub_ovf(a[r * n + dst], prod, &res):
            return 1
        if res > LIMIT or res < -LIMIT:
            return 1
        a[r * n + dst] = res
    return 0


cdef int smith_core(long long *A, long long *U, long long *V, Py_ssize_t m, Py_ssize_t n) nogil:
    cdef Py_ssize_t t = 0, i, j, bi, bj, bad
    cdef long long best, a, p, q, res
    while t < m and t < n:
        best = 0
        bi = -1
        bj = -1
        for i in range(t, m):
            for j in range(t, n):
                a = A[i * n + j]
                if a:
                    a = absll(a)
                    if best == 0 or a < best:
                        best = a
                        bi = i
                        bj = j
        if best == 0:
            break
        while True:
            if bi != t:
                swap_rows(A, n, t, bi)
                swap_rows(U, m, t, bi)
            if bj != t:
                swap_cols(A, m, n, t, bj)
                swap_cols(V, n, n, t, bj)
            p = A[t * n + t]
            for i in range(t + 1, m):
                a = A[i * n + t]
                if a:
                    q = floordiv(a, p)
                    if q:
                        if axpy(A + i * n, A + t * n, q, t, n):
                            return 1
                        if axpy(U + i * m, U + t * m, q, 0, m):
                            return 1
            for j in range(t + 1, n):
                a = A[t * n + j]
                if a:
                    q = floordiv(a, p)
                    if q:
                        if col_axpy(A, m, n, j, t, q, t):
                            return 1
                        if col_axpy(V, n, n, j, t, q, 0):
                            return 1
            best = 0
            bi = -1
            bj = -1
            for i in range(t + 1, m):
                a = A[i * n + t]
                if a:
                    a = absll(a)
                    if best == 0 or a < best:
                        best = a
                        bi = i
                        bj = t
            for j in range(t + 1, n):
                a = A[t * n + j]
                if a:
                    a = absll(a)
                    if best == 0 or a < best:
                        best = a
                        bi = t
                        bj = j
            if best:
                continue
            bad = -1
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i * n + j] % p:
                        bad = i
                        break
                if bad >= 0:
                    break
            if bad < 0:
                break
            for j in range(t, n):
                if wls_add_ovf(A[t * n + j], A[bad * n + j], &res) or res > LIMIT or res < -LIMIT:
                    return 1
                A[t * n + j] = res
            for j in range(m):
                if wls_add_ovf(U[t * m + j], U[bad * m + j], &res) or res > LIMIT or res < -LIMIT:
                    return 1
                U[t * m + j] = res
            bi = t
            bj = t
        if A[t * n + t] < 0:
            for j in range(n):
                A[t * n + j] = -A[t * n + j]
            for j in range(m):
                U[t * m + j] = -U[t * m + j]
        t += 1
    return 0


def smith(rows, Py_ssize_t nrows, Py_ssize_t ncols):
    cdef long long *A = load(rows, nrows, ncols)
    cdef long long *U = NULL
    cdef long long *V = NULL
    cdef int err
    try:
        U = ident(nrows)
        V = ident(ncols)
        with nogil:
            err = smith_core(A, U, V, nrows, ncols)
        if err:
            raise OverflowError("int64 overflow in smith kernel")
        return dump(U, nrows, nrows), dump(A, nrows, ncols), dump(V, ncols, ncols)
    finally:
        free(A)
        if U != NULL:
            free(U)
        if V != NULL:
            free(V)


cdef int echelon_core(long long *H, long long *T, Py_ssize_t k, Py_ssize_t n, Py_ssize_t *rank) nogil:
    cdef Py_ssize_t r = 0, c, i, j, bi
    cdef long long best, a, p, q
    cdef bint done
    for c in range(n):
        if r >= k:
            break
        while True:
            best = 0
            bi = -1
            for i in range(r, k):
                a = H[i * n + c]
                if a:
                    a = absll(a)
                    if best == 0 or a < best:
                        best = a
                        bi = i
            if best == 0:
                break
            if bi != r:
                swap_rows(H, n, r, bi)
                if T != NULL:
                    swap_rows(T, k, r, bi)
            p = H[r * n + c]
            done = True
            for i in range(r + 1, k):
                a = H[i * n + c]
                if a:
                    q = floordiv(a, p)
                    if axpy(H + i * n, H + r * n, q, c, n):
                        return 1
                    if T != NULL:
                        if axpy(T + i * k, T + r * k, q, 0, k):
                            return 1
                    if H[i * n + c]:
                        done = False
            if done:
                break
        if best == 0:
            continue
        if H[r * n + c] < 0:
            for j in range(n):
                H[r * n + j] = -H[r * n + j]
            if T != NULL:
                for j in range(k):
                    T[r * k + j] = -T[r * k + j]
        p = H[r * n + c]
        for i in range(r):
            a = H[i * n + c]
            if a < 0 or a >= p:
                q = floordiv(a, p)
                if axpy(H + i * n, H + r * n, q, c, n):
                    return 1
                if T != NULL:
                    if axpy(T + i * k, T + r * k, q, 0, k):
                        return 1
        r += 1
    rank[0] = r
    return 0


def echelon(rows, Py_ssize_t ncols, bint transform=False):
    cdef Py_ssize_t k = len(rows)
    cdef long long *H = load(rows, k, ncols)
    cdef long long *T = NULL
    cdef Py_ssize_t rank = 0
    cdef int err
    try:
        if transform:
            T = ident(k)
        with nogil:
            err = echelon_core(H, T, k, ncols, &rank)
        if err:
            raise OverflowError("int64 overflow in echelon kernel")
        return dump(H, rank, ncols), (dump(T, k, k) if transform else None)
    finally:
        free(H)
        if T != NULL:
            free(T)
