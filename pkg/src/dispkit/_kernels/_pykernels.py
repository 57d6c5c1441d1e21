"""Pure-Python reference kernels.

Same contract as the compiled ``_cykernels`` extension; used as the
fallback when the extension is unavailable (or when ``DISPKIT_PURE`` is
set).  All matrices are flat row-major sequences.
"""

from math import sqrt


def matmul_f64(a, b, m, k, n):
    """Multiply an m*k by a k*n float matrix, both flat row-major."""
    out = [0.0] * (m * n)
    for i in range(m):
        ai = i * k
        oi = i * n
        for p in range(k):
            aip = a[ai + p]
            if aip == 0.0:
                continue
            bp = p * n
            for j in range(n):
                out[oi + j] += aip * b[bp + j]
    return out


def matmul_obj(a, b, m, k, n):
    """Exact-scalar (int / Fraction) counterpart of :func:`matmul_f64`."""
    out = [0] * (m * n)
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
                    out[oi + j] += aip * bpj
    return out


def jacobi_svd(a, m, n, max_sweeps, tol):
    """One-sided Jacobi orthogonalization of the columns of an m x n matrix.

    Requires m >= n.  Returns ``(w, v, sweeps, converged)`` where ``w`` is
    the rotated matrix (columns mutually orthogonal, norms are the singular
    values), ``v`` accumulates the right rotations (n x n orthogonal), and
    ``sweeps`` counts full passes.  A pair is rotated only while
    ``|w_i . w_j| > tol * |w_i| * |w_j|``; a sweep with no rotations ends
    the iteration.
    """
    w = [float(x) for x in a]
    v = [0.0] * (n * n)
    for i in range(n):
        v[i * n + i] = 1.0

    sweeps = 0
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
                if gamma == 0.0 or abs(gamma) <= tol * sqrt(alpha * beta):
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
                    vi = v[r * n + i]
                    vj = v[r * n + j]
                    v[r * n + i] = c * vi - s * vj
                    v[r * n + j] = s * vi + c * vj
        if not rotated:
            converged = True
    return w, v, sweeps, converged


def bareiss_rank(rows, m, n):
    """Rank of an integer matrix by fraction-free (Bareiss) elimination.

    ``rows`` is a list of row lists of Python ints and is consumed.
    Pivoting picks the first nonzero entry in each column.
    """
    prev = 1
    rank = 0
    r = 0
    for c in range(n):
        if r == m:
            break
        pivot = -1
        for i in range(r, m):
            if rows[i][c]:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            rows[pivot], rows[r] = rows[r], rows[pivot]
        piv_row = rows[r]
        piv = piv_row[c]
        for i in range(r + 1, m):
            row = rows[i]
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
