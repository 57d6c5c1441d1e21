# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: float matmul, one-sided Jacobi SVD, exact matmul,
fraction-free rank.  Mirrors ``_pykernels`` exactly."""

from libc.math cimport fabs, sqrt
from libc.stdlib cimport free, malloc


def matmul_f64(a, b, Py_ssize_t m, Py_ssize_t k, Py_ssize_t n):
    cdef double *ca = <double *> malloc(m * k * sizeof(double))
    cdef double *cb = <double *> malloc(k * n * sizeof(double))
    cdef double *co = <double *> malloc(m * n * sizeof(double))
    cdef Py_ssize_t i, j, p
    cdef double aip
    if ca == NULL or cb == NULL or co == NULL:
        free(ca); free(cb); free(co)
        raise MemoryError()
    try:
        for i in range(m * k):
            ca[i] = a[i]
        for i in range(k * n):
            cb[i] = b[i]
        for i in range(m * n):
            co[i] = 0.0
        for i in range(m):
            for p in range(k):
                aip = ca[i * k + p]
                if aip == 0.0:
                    continue
                for j in range(n):
                    co[i * n + j] += aip * cb[p * n + j]
        return [co[i] for i in range(m * n)]
    finally:
        free(ca); free(cb); free(co)


def matmul_obj(a, b, Py_ssize_t m, Py_ssize_t k, Py_ssize_t n):
    cdef list out = [0] * (m * n)
    cdef Py_ssize_t i, j, p, ai, oi, bp
    for i in range(m):
        ai = i * k
        oi = i * n
        for p in range(k):
            aip = a[ai + p]
            if not aip:
                continue
            bp = p * n
            for j in range(n):
                bpj = b[bp + j]
                if bpj:
                    out[oi + j] = out[oi + j] + aip * bpj
    return out


def jacobi_svd(a, Py_ssize_t m, Py_ssize_t n, int max_sweeps, double tol):
    cdef double *w = <double *> malloc(m * n * sizeof(double))
    cdef double *v = <double *> malloc(n * n * sizeof(double))
    cdef Py_ssize_t i, j, r
    cdef int sweeps = 0
    cdef bint converged, rotated
    cdef double alpha, beta, gamma, zeta, t, c, s, wi, wj
    if w == NULL or v == NULL:
        free(w); free(v)
        raise MemoryError()
    try:
        for i in range(m * n):
            w[i] = a[i]
        for i in range(n * n):
            v[i] = 0.0
        for i in range(n):
            v[i * n + i] = 1.0

        converged = n < 2
        while sweeps < max_sweeps and not converged:
            sweeps += 1
            rotated = False
            for i in range(n - 1):
                for j in range(i + 1, n):
                    alpha = 0.0
                    beta = 0.0
                    gamma = 0.0
                    for r in range(m):
                        wi = w[r * n + i]
                        wj = w[r * n + j]
                        alpha += wi * wi
                        beta += wj * wj
                        gamma += wi * wj
                    if gamma == 0.0 or fabs(gamma) <= tol * sqrt(alpha * beta):
                        continue
                    rotated = True
                    zeta = (beta - alpha) / (2.0 * gamma)
                    if zeta >= 0.0:
                        t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                    else:
                        t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = c * t
                    for r in range(m):
                        wi = w[r * n + i]
                        wj = w[r * n + j]
                        w[r * n + i] = c * wi - s * wj
                        w[r * n + j] = s * wi + c * wj
                    for r in range(n):
                        wi = v[r * n + i]
                        wj = v[r * n + j]
                        v[r * n + i] = c * wi - s * wj
                        v[r * n + j] = s * wi + c * wj
            if not rotated:
                converged = True
        return (
            [w[i] for i in range(m * n)],
            [v[i] for i in range(n * n)],
            sweeps,
            converged,
        )
    finally:
        free(w); free(v)


def bareiss_rank(list rows, Py_ssize_t m, Py_ssize_t n):
    cdef Py_ssize_t c, i, j, r = 0, pivot
    cdef Py_ssize_t rank = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        pivot = -1
        for i in range(r, m):
            if (<list> rows[i])[c]:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            rows[pivot], rows[r] = rows[r], rows[pivot]
        piv_row = <list> rows[r]
        piv = piv_row[c]
        for i in range(r + 1, m):
            row = <list> rows[i]
            ric = row[c]
            if ric:
                for j in range(c + 1, n):
                    q, rem = divmod(piv * row[j] - ric * piv_row[j], prev)
                    if rem:
                        raise ArithmeticError("inexact division in Bareiss step")
                    row[j] = q
            else:
                for j in range(c + 1, n):
                    q, rem = divmod(piv * row[j], prev)
                    if rem:
                        raise ArithmeticError("inexact division in Bareiss step")
                    row[j] = q
            row[c] = 0
        prev = piv
        r += 1
        rank += 1
    return rank
