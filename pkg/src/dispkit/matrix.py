"""Dense matrices over two scalar backends: float64 and exact rationals.

The exact backend stores Python ints (rationals with denominator 1 are
normalized to int) and :class:`fractions.Fraction`, so integer matrices
compute at native-int speed while arbitrary rationals stay closed and
overflow-free.  All values are immutable; every operation returns a new
matrix.  Hot loops (matmul, Jacobi SVD, Bareiss elimination) run in the
compiled kernel extension when it is available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from dispkit import _kernels

FLOAT64 = "float64"
EXACT = "exact"

#: Relative singular-value cutoff shared by rank, pinv and generator
#: truncation decisions.
DEFAULT_RANK_TOL = 1e-8

_SVD_MAX_SWEEPS = 60
_SVD_PAIR_TOL = 1e-15


class MatrixError(Exception):
    """Base class for matrix-layer failures."""


class ShapeError(MatrixError):
    """Operand shapes are incompatible."""


class BackendError(MatrixError):
    """Operation not defined for this scalar backend (or mixed backends)."""


class SingularMatrixError(MatrixError):
    """Inversion of a singular matrix; carries the offending rank report."""

    def __init__(self, message, rank_report=None):
        super().__init__(message)
        self.rank_report = rank_report


class ConvergenceError(MatrixError):
    """Iteration cap hit; carries the iteration count."""

    def __init__(self, message, iterations):
        super().__init__(message)
        self.iterations = iterations


def _coerce_float(value):
    if isinstance(value, Fraction):
        return float(value)
    return float(value)


def _coerce_exact(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    if isinstance(value, float):
        frac = Fraction(value)
        return int(frac) if frac.denominator == 1 else frac
    raise BackendError(f"cannot represent {value!r} exactly")


class DenseMatrix:
    """Immutable rectangular matrix with a fixed scalar backend."""

    __slots__ = ("rows", "cols", "backend", "_data")

    def __init__(self, rows, cols, entries, backend=EXACT):
        if rows < 1 or cols < 1:
            raise ShapeError(f"matrix dimensions must be positive, got {rows}x{cols}")
        entries = list(entries)
        if len(entries) != rows * cols:
            raise ShapeError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        if backend == FLOAT64:
            data = tuple(_coerce_float(x) for x in entries)
        elif backend == EXACT:
            data = tuple(_coerce_exact(x) for x in entries)
        else:
            raise BackendError(f"unknown backend {backend!r}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "backend", backend)
        object.__setattr__(self, "_data", data)

    def __setattr__(self, name, value):
        raise AttributeError("DenseMatrix is immutable")

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows, backend=None):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ShapeError("from_rows needs a non-empty list of non-empty rows")
        ncols = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ShapeError(f"row {i} has {len(r)} entries, expected {ncols}")
        flat = [x for r in rows for x in r]
        if backend is None:
            backend = FLOAT64 if any(isinstance(x, float) for x in flat) else EXACT
        return cls(len(rows), ncols, flat, backend)

    @classmethod
    def from_cols(cls, cols, backend=None):
        rows = list(zip(*cols))
        return cls.from_rows(rows, backend)

    @classmethod
    def zeros(cls, rows, cols, backend=EXACT):
        return cls(rows, cols, [0] * (rows * cols), backend)

    @classmethod
    def identity(cls, n, backend=EXACT):
        flat = [0] * (n * n)
        for i in range(n):
            flat[i * n + i] = 1
        return cls(n, n, flat, backend)

    @classmethod
    def diagonal(cls, values, backend=None):
        values = list(values)
        n = len(values)
        if backend is None:
            backend = FLOAT64 if any(isinstance(x, float) for x in values) else EXACT
        flat = [0] * (n * n)
        for i, x in enumerate(values):
            flat[i * n + i] = x
        return cls(n, n, flat, backend)

    # -- accessors ---------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, key):
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index ({i}, {j}) out of range for {self.rows}x{self.cols}")
        return self._data[i * self.cols + j]

    def row(self, i):
        return self._data[i * self.cols : (i + 1) * self.cols]

    def col(self, j):
        return tuple(self._data[i * self.cols + j] for i in range(self.rows))

    def flat(self):
        return self._data

    def tolists(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def block(self, r0, r1, c0, c1):
        """Submatrix of rows [r0, r1) and columns [c0, c1)."""
        if not (0 <= r0 < r1 <= self.rows and 0 <= c0 < c1 <= self.cols):
            raise ShapeError(
                f"block [{r0}:{r1}, {c0}:{c1}] out of range for {self.rows}x{self.cols}"
            )
        flat = [
            self._data[i * self.cols + j] for i in range(r0, r1) for j in range(c0, c1)
        ]
        return DenseMatrix(r1 - r0, c1 - c0, flat, self.backend)

    # -- conversions --------------------------------------------------------

    def to_float(self):
        if self.backend == FLOAT64:
            return self
        return DenseMatrix(self.rows, self.cols, self._data, FLOAT64)

    def to_exact(self):
        """Exact copy; float entries convert via their exact binary value."""
        if self.backend == EXACT:
            return self
        return DenseMatrix(self.rows, self.cols, self._data, EXACT)

    # -- arithmetic ----------------------------------------------------------

    def _check_same_backend(self, other, op):
        if self.backend != other.backend:
            raise BackendError(
                f"{op}: mixed backends {self.backend} and {other.backend}"
            )

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and self.backend == other.backend
            and self._data == other._data
        )

    def __add__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        self._check_same_backend(other, "add")
        if self.shape != other.shape:
            raise ShapeError(f"add: shapes {self.shape} and {other.shape} differ")
        data = [x + y for x, y in zip(self._data, other._data)]
        return DenseMatrix(self.rows, self.cols, data, self.backend)

    def __sub__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        self._check_same_backend(other, "sub")
        if self.shape != other.shape:
            raise ShapeError(f"sub: shapes {self.shape} and {other.shape} differ")
        data = [x - y for x, y in zip(self._data, other._data)]
        return DenseMatrix(self.rows, self.cols, data, self.backend)

    def __neg__(self):
        return DenseMatrix(self.rows, self.cols, [-x for x in self._data], self.backend)

    def scale(self, scalar):
        if self.backend == FLOAT64:
            s = _coerce_float(scalar)
        else:
            s = _coerce_exact(scalar)
        return DenseMatrix(self.rows, self.cols, [s * x for x in self._data], self.backend)

    def __mul__(self, scalar):
        return self.scale(scalar)

    def __rmul__(self, scalar):
        return self.scale(scalar)

    def __matmul__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return matmul(self, other)

    @property
    def T(self):
        return transpose(self)

    # -- metrics -------------------------------------------------------------

    def is_zero(self):
        return all(not x for x in self._data)

    def fro_norm(self):
        if self.backend == FLOAT64:
            return math.sqrt(math.fsum(x * x for x in self._data))
        return math.sqrt(float(sum(x * x for x in self._data)))

    def max_abs(self):
        return max((abs(float(x)) for x in self._data), default=0.0)

    def __repr__(self):
        return f"DenseMatrix({self.rows}x{self.cols}, {self.backend})"

    def __str__(self):
        rows = []
        for i in range(self.rows):
            rows.append("  ".join(_entry_str(x) for x in self.row(i)))
        return "\n".join(rows)


def _entry_str(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


@dataclass(frozen=True)
class RankReport:
    """A rank claim together with how it was computed."""

    rank: int
    method: str  # "svd-threshold" or "exact-bareiss"
    tolerance: float

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD A = U diag(sigma) V* with r = min(rows, cols) columns."""

    U: DenseMatrix
    sigma: tuple
    V: DenseMatrix

    def reconstruct(self):
        core = DenseMatrix.diagonal(self.sigma, FLOAT64)
        return matmul(matmul(self.U, core), transpose(self.V))


# -- basic operations ---------------------------------------------------------


def matmul(a, b):
    """Matrix product; operands must share shape compatibility and backend."""
    a._check_same_backend(b, "matmul")
    if a.cols != b.rows:
        raise ShapeError(
            f"matmul: {a.rows}x{a.cols} by {b.rows}x{b.cols} (inner dimensions differ)"
        )
    if a.backend == FLOAT64:
        flat = _kernels.matmul_f64(a.flat(), b.flat(), a.rows, a.cols, b.cols)
    else:
        flat = _kernels.matmul_obj(a.flat(), b.flat(), a.rows, a.cols, b.cols)
    return DenseMatrix(a.rows, b.cols, flat, a.backend)


def transpose(a):
    data = a.flat()
    cols = a.cols
    flat = [data[i * cols + j] for j in range(cols) for i in range(a.rows)]
    return DenseMatrix(cols, a.rows, flat, a.backend)


def direct_sum(a, b):
    """Block-diagonal sum of two square matrices."""
    if a.rows != a.cols:
        raise ShapeError(f"direct_sum: left operand {a.rows}x{a.cols} is not square")
    if b.rows != b.cols:
        raise ShapeError(f"direct_sum: right operand {b.rows}x{b.cols} is not square")
    a._check_same_backend(b, "direct_sum")
    n = a.rows + b.rows
    out = [0] * (n * n)
    for i in range(a.rows):
        for j in range(a.cols):
            out[i * n + j] = a[i, j]
    for i in range(b.rows):
        for j in range(b.cols):
            out[(a.rows + i) * n + (a.cols + j)] = b[i, j]
    return DenseMatrix(n, n, out, a.backend)


def hstack(*mats):
    rows = mats[0].rows
    backend = mats[0].backend
    for m in mats[1:]:
        if m.rows != rows:
            raise ShapeError("hstack: row counts differ")
        mats[0]._check_same_backend(m, "hstack")
    out_rows = []
    for i in range(rows):
        row = []
        for m in mats:
            row.extend(m.row(i))
        out_rows.append(row)
    return DenseMatrix.from_rows(out_rows, backend)


def vstack(*mats):
    cols = mats[0].cols
    for m in mats[1:]:
        if m.cols != cols:
            raise ShapeError("vstack: column counts differ")
        mats[0]._check_same_backend(m, "vstack")
    out_rows = []
    for m in mats:
        out_rows.extend(m.tolists())
    return DenseMatrix.from_rows(out_rows, mats[0].backend)


def block2x2(a, b, c, d):
    return vstack(hstack(a, b), hstack(c, d))


# -- structural constructors --------------------------------------------------


def shift_matrix(n, backend=EXACT):
    """Lower shift: ones on the first subdiagonal; nilpotent of order n."""
    if n < 1:
        raise ShapeError(f"shift_matrix: size must be >= 1, got {n}")
    flat = [0] * (n * n)
    for i in range(1, n):
        flat[i * n + (i - 1)] = 1
    return DenseMatrix(n, n, flat, backend)


def reverse_identity(n, backend=EXACT):
    """Ones on the anti-diagonal; an orthogonal involution."""
    if n < 1:
        raise ShapeError(f"reverse_identity: size must be >= 1, got {n}")
    flat = [0] * (n * n)
    for i in range(n):
        flat[i * n + (n - 1 - i)] = 1
    return DenseMatrix(n, n, flat, backend)


def cyclic_shift(n, backend=EXACT):
    """Cyclic up-shift: ones at (i, i+1) and at (n, 1); orthogonal."""
    if n < 1:
        raise ShapeError(f"cyclic_shift: size must be >= 1, got {n}")
    flat = [0] * (n * n)
    for i in range(n - 1):
        flat[i * n + (i + 1)] = 1
    flat[(n - 1) * n] = 1
    return DenseMatrix(n, n, flat, backend)


def alternating_shift(n, backend=EXACT):
    """Subdiagonal entries +1, -1, +1, ...; strictly lower, hence nilpotent."""
    if n < 1:
        raise ShapeError(f"alternating_shift: size must be >= 1, got {n}")
    flat = [0] * (n * n)
    for i in range(1, n):
        flat[i * n + (i - 1)] = 1 if i % 2 == 1 else -1
    return DenseMatrix(n, n, flat, backend)


# -- SVD and ranks ------------------------------------------------------------


def _orthonormal_complement_columns(cols, m, count):
    """Return `count` orthonormal m-vectors orthogonal to the given columns.

    Candidates are standard basis vectors; two Gram-Schmidt passes keep the
    result orthonormal to working precision.
    """
    basis = [list(c) for c in cols]
    added = []
    for _ in range(count):
        best = None
        best_norm = -1.0
        for k in range(m):
            cand = [0.0] * m
            cand[k] = 1.0
            for _pass in range(2):
                for q in basis:
                    dot = math.fsum(cand[r] * q[r] for r in range(m))
                    for r in range(m):
                        cand[r] -= dot * q[r]
            norm = math.sqrt(math.fsum(x * x for x in cand))
            if norm > best_norm:
                best_norm = norm
                best = cand
        if best_norm <= 0.0:
            raise MatrixError("orthonormal completion failed")
        best = [x / best_norm for x in best]
        basis.append(best)
        added.append(best)
    return added


def svd(a):
    """One-sided Jacobi SVD (float backend): A = U diag(sigma) V*.

    U is rows x r and V is cols x r with r = min(rows, cols); both have
    orthonormal columns, sigma is non-negative and non-increasing.  Raises
    :class:`ConvergenceError` if 60 sweeps do not converge.
    """
    if a.backend != FLOAT64:
        raise BackendError("svd requires the float64 backend; use to_float() first")
    if a.rows < a.cols:
        flipped = svd(transpose(a))
        return SvdResult(U=flipped.V, sigma=flipped.sigma, V=flipped.U)

    m, n = a.rows, a.cols
    w, v, sweeps, converged = _kernels.jacobi_svd(
        a.flat(), m, n, _SVD_MAX_SWEEPS, _SVD_PAIR_TOL
    )
    if not converged:
        raise ConvergenceError(
            f"Jacobi SVD did not converge within {sweeps} sweeps", iterations=sweeps
        )

    cols_w = [[w[r * n + j] for r in range(m)] for j in range(n)]
    cols_v = [[v[r * n + j] for r in range(n)] for j in range(n)]
    norms = [math.sqrt(math.fsum(x * x for x in c)) for c in cols_w]
    order = sorted(range(n), key=lambda j: -norms[j])

    sigma = []
    u_cols = []
    v_cols = []
    pending = []
    for j in order:
        sigma.append(norms[j])
        v_cols.append(cols_v[j])
        if norms[j] > 0.0:
            u_cols.append([x / norms[j] for x in cols_w[j]])
        else:
            u_cols.append(None)
            pending.append(len(u_cols) - 1)
    if pending:
        fills = _orthonormal_complement_columns(
            [c for c in u_cols if c is not None], m, len(pending)
        )
        for idx, col in zip(pending, fills):
            u_cols[idx] = col

    U = DenseMatrix.from_cols(u_cols, FLOAT64)
    V = DenseMatrix.from_cols(v_cols, FLOAT64)
    return SvdResult(U=U, sigma=tuple(sigma), V=V)


def numerical_rank(a, tol=DEFAULT_RANK_TOL):
    """Count of singular values above tol * sigma_max (float backend)."""
    if tol < 0:
        raise ValueError(f"tolerance must be non-negative, got {tol}")
    if a.backend != FLOAT64:
        raise BackendError(
            "numerical_rank requires the float64 backend; use to_float() first"
        )
    res = svd(a)
    if not res.sigma or res.sigma[0] == 0.0:
        rank = 0
    else:
        cutoff = tol * res.sigma[0]
        rank = sum(1 for s in res.sigma if s > cutoff)
    return RankReport(rank=rank, method="svd-threshold", tolerance=tol)


def _integer_rows(a):
    """Rows of `a` scaled to integers (row scaling preserves rank)."""
    exact = a.to_exact()
    out = []
    for i in range(exact.rows):
        row = list(exact.row(i))
        denoms = [x.denominator for x in row if isinstance(x, Fraction)]
        if denoms:
            scale = math.lcm(*denoms)
            row = [int(x * scale) for x in row]
        else:
            row = [int(x) for x in row]
        out.append(row)
    return out


def exact_rank(a):
    """True rank over the rationals via fraction-free elimination.

    Float inputs are converted exactly (every float is a rational).
    """
    rows = _integer_rows(a)
    rank = _kernels.bareiss_rank(rows, a.rows, a.cols)
    return RankReport(rank=rank, method="exact-bareiss", tolerance=0.0)


def matrix_power(a, k):
    if a.rows != a.cols:
        raise ShapeError(f"matrix_power: {a.rows}x{a.cols} is not square")
    if k < 0:
        raise ValueError("matrix_power: negative exponent")
    result = DenseMatrix.identity(a.rows, a.backend)
    base = a
    while k:
        if k & 1:
            result = matmul(result, base)
        base = matmul(base, base) if k > 1 else base
        k >>= 1
    return result
