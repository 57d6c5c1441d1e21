"""Displacement operators, displacement rank, and generator factorizations.

Two operators act on an m x n matrix A given square displacement matrices
Z (m x m) and N (n x n):

* ``nabla``:  A - Z A N
* ``delta``:  Z A - A N

The rank of the displaced matrix is the displacement rank; a small value
means A is structured (close to Toeplitz or Hankel in the classical
patterns).  When Z is nilpotent the nabla operator is invertible through a
finite shifted sum, implemented by :func:`reconstruct_nabla`.
"""

from __future__ import annotations

from dataclasses import dataclass

from dispkit.matrix import (
    DEFAULT_RANK_TOL,
    EXACT,
    FLOAT64,
    BackendError,
    DenseMatrix,
    MatrixError,
    ShapeError,
    alternating_shift,
    cyclic_shift,
    direct_sum,
    exact_rank,
    matmul,
    numerical_rank,
    reverse_identity,
    shift_matrix,
    svd,
    transpose,
)

NABLA = "nabla"
DELTA = "delta"


class DisplacementError(MatrixError):
    """Displacement-layer failure (bad pattern, non-invertible operator)."""


@dataclass(frozen=True)
class DisplacementPattern:
    """A displacement operator: the pair (Z, N) plus the operator kind."""

    Z: DenseMatrix
    N: DenseMatrix
    kind: str

    def __post_init__(self):
        if self.kind not in (NABLA, DELTA):
            raise DisplacementError(f"unknown displacement kind {self.kind!r}")
        if self.Z.rows != self.Z.cols:
            raise ShapeError(f"pattern Z is {self.Z.rows}x{self.Z.cols}, must be square")
        if self.N.rows != self.N.cols:
            raise ShapeError(f"pattern N is {self.N.rows}x{self.N.cols}, must be square")

    def apply(self, a):
        """The displaced matrix of `a` under this pattern."""
        if self.kind == NABLA:
            return nabla(a, self.Z, self.N)
        return delta(a, self.Z, self.N)

    def describe(self):
        tag = "dN" if self.kind == NABLA else "dD"
        return f"{tag}[{self.Z.rows}x{self.Z.rows},{self.N.rows}x{self.N.rows}]"


def nabla(a, z, n):
    """A - Z A N."""
    _check_pattern_shapes(a, z, n, "nabla")
    return a - matmul(matmul(z, a), n)


def delta(a, z, n):
    """Z A - A N."""
    _check_pattern_shapes(a, z, n, "delta")
    return matmul(z, a) - matmul(a, n)


def _check_pattern_shapes(a, z, n, op):
    if z.rows != z.cols or z.rows != a.rows:
        raise ShapeError(
            f"{op}: Z is {z.rows}x{z.cols}, expected {a.rows}x{a.rows} for a "
            f"{a.rows}x{a.cols} operand"
        )
    if n.rows != n.cols or n.rows != a.cols:
        raise ShapeError(
            f"{op}: N is {n.rows}x{n.cols}, expected {a.cols}x{a.cols} for a "
            f"{a.rows}x{a.cols} operand"
        )


def dual_pattern(pattern):
    """Swap Z and N, keeping the kind; an involution."""
    return DisplacementPattern(Z=pattern.N, N=pattern.Z, kind=pattern.kind)


def displacement_rank(a, pattern, method="auto", tol=DEFAULT_RANK_TOL):
    """Rank of the displaced matrix.

    ``method`` is "exact", "svd", or "auto" (exact for exact-backend
    operands, SVD threshold for floats) — the operand decides, because
    exact claims should be verified exactly.
    """
    displaced = pattern.apply(a)
    if method == "auto":
        method = "exact" if a.backend == EXACT else "svd"
    if method == "exact":
        return exact_rank(displaced)
    if method == "svd":
        return numerical_rank(displaced.to_float(), tol)
    raise ValueError(f"unknown rank method {method!r}")


@dataclass(frozen=True)
class Generator:
    """Low-rank factorization left . core . right* of a displaced matrix.

    ``width`` is the inner dimension d; a zero displaced matrix has d = 0
    and stores no factors (left/core/right are None).
    """

    left: DenseMatrix | None
    core: DenseMatrix | None
    right: DenseMatrix | None
    pattern: DisplacementPattern
    width: int

    def displaced(self):
        """Re-form the displaced matrix from the factors."""
        m = self.pattern.Z.rows
        n = self.pattern.N.rows
        if self.width == 0:
            return DenseMatrix.zeros(m, n, FLOAT64)
        return matmul(matmul(self.left, self.core), transpose(self.right))


def generator_factorization(a, pattern, tol=DEFAULT_RANK_TOL):
    """Minimal generator: SVD of the displaced matrix truncated at `tol`."""
    af = a.to_float()
    displaced = pattern.apply(af)
    res = svd(displaced)
    if not res.sigma or res.sigma[0] == 0.0:
        rank = 0
    else:
        cutoff = tol * res.sigma[0]
        rank = sum(1 for s in res.sigma if s > cutoff)
    if rank == 0:
        return Generator(left=None, core=None, right=None, pattern=pattern, width=0)
    left = res.U.block(0, res.U.rows, 0, rank)
    right = res.V.block(0, res.V.rows, 0, rank)
    core = DenseMatrix.diagonal(res.sigma[:rank], FLOAT64)
    return Generator(left=left, core=core, right=right, pattern=pattern, width=rank)


def svd_generator(a, z, n, tol=DEFAULT_RANK_TOL):
    """Rank-revealing generator [U  ZU] diag(S, -S) [V  N*V]* of nabla(A).

    Built from the rank-r SVD of a square A; the inner dimension is 2r,
    which may exceed the displacement rank — the point is the explicit
    shape, not minimality.
    """
    if a.rows != a.cols:
        raise ShapeError(f"svd_generator: {a.rows}x{a.cols} operand must be square")
    af = a.to_float()
    zf = z.to_float()
    nf = n.to_float()
    _check_pattern_shapes(af, zf, nf, "svd_generator")
    pattern = DisplacementPattern(Z=zf, N=nf, kind=NABLA)
    res = svd(af)
    if not res.sigma or res.sigma[0] == 0.0:
        rank = 0
    else:
        cutoff = tol * res.sigma[0]
        rank = sum(1 for s in res.sigma if s > cutoff)
    if rank == 0:
        return Generator(left=None, core=None, right=None, pattern=pattern, width=0)
    u = res.U.block(0, res.U.rows, 0, rank)
    v = res.V.block(0, res.V.rows, 0, rank)
    from dispkit.matrix import hstack  # local import avoids cycle at module load

    left = hstack(u, matmul(zf, u))
    right = hstack(v, matmul(transpose(nf), v))
    core_diag = list(res.sigma[:rank]) + [-s for s in res.sigma[:rank]]
    core = DenseMatrix.diagonal(core_diag, FLOAT64)
    return Generator(left=left, core=core, right=right, pattern=pattern, width=2 * rank)


def is_nilpotent(z, order):
    """True when z**order is exactly zero (checked over the rationals)."""
    if z.rows != z.cols:
        return False
    power = DenseMatrix.identity(z.rows, EXACT)
    zx = z.to_exact()
    for _ in range(order):
        power = matmul(power, zx)
        if power.is_zero():
            return True
    return power.is_zero()


def reconstruct_nabla(d, z, n, k):
    """Invert the nabla operator: sum of Z^i D N^i for i = 0..k.

    Valid whenever Z^(k+1) = 0 (checked exactly); then the sum applied to
    nabla(A, Z, N) returns A.
    """
    if k < 0:
        raise ValueError(f"reconstruct_nabla: k must be non-negative, got {k}")
    _check_pattern_shapes(d, z, n, "reconstruct_nabla")
    if not is_nilpotent(z, k + 1):
        raise DisplacementError(
            "displacement operator not invertible via this sum: "
            f"Z^{k + 1} is not zero"
        )
    total = d
    term = d
    for _ in range(k):
        term = matmul(matmul(z, term), n)
        total = total + term
    return total


# -- pattern mini-language ------------------------------------------------------

#: Named displacement atoms available to the CLI: S (lower shift),
#: St (upper shift), J (reverse identity), I, C/Ct (cyclic), Zalt
#: (alternating shift).  A trailing 'T'/'t' transposes, a leading '-' negates.
_ATOM_BUILDERS = {
    "S": shift_matrix,
    "J": reverse_identity,
    "I": lambda size, backend=EXACT: DenseMatrix.identity(size, backend),
    "C": cyclic_shift,
    "Zalt": alternating_shift,
}


def build_atom(name, size, backend=EXACT):
    """Resolve one atom of the pattern mini-language at a given size.

    Grammar: ``[-]BASE[T]`` with BASE in {S, J, I, C, Zalt}; ``St`` is
    accepted as the conventional spelling of the transposed shift.
    """
    spec = name.strip()
    if not spec:
        raise DisplacementError("empty displacement atom")
    negate = spec.startswith("-")
    if negate:
        spec = spec[1:]
    transpose_it = False
    base = spec
    if base not in _ATOM_BUILDERS and base[-1:] in ("T", "t"):
        base = base[:-1]
        transpose_it = True
    if base not in _ATOM_BUILDERS:
        raise DisplacementError(
            f"unknown displacement atom {name!r}; known: "
            + ", ".join(sorted(_ATOM_BUILDERS))
        )
    mat = _ATOM_BUILDERS[base](size, backend)
    if transpose_it:
        mat = transpose(mat)
    if negate:
        mat = -mat
    return mat


def parse_pattern(spec, rows, cols, backend=EXACT):
    """Parse ``kind:Zatom,Natom`` (e.g. ``nabla:S,St``) at given sizes."""
    try:
        kind, atoms = spec.split(":", 1)
        z_name, n_name = atoms.split(",", 1)
    except ValueError:
        raise DisplacementError(
            f"bad pattern spec {spec!r}; expected e.g. 'nabla:S,St'"
        ) from None
    kind = kind.strip().lower()
    if kind not in (NABLA, DELTA):
        raise DisplacementError(f"unknown displacement kind {kind!r} in {spec!r}")
    z = build_atom(z_name, rows, backend)
    n = build_atom(n_name, cols, backend)
    return DisplacementPattern(Z=z, N=n, kind=kind)
