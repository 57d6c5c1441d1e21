"""Kernel dispatch: compiled extension when available, pure Python otherwise.

Set ``DISPKIT_PURE=1`` to force the pure-Python kernels (used by the
benchmark and by the kernel parity tests).
"""

import os

if os.environ.get("DISPKIT_PURE"):
    from dispkit._kernels import _pykernels as _impl

    KERNEL_BACKEND = "pure"
else:
    try:
        from dispkit._kernels import _cykernels as _impl

        KERNEL_BACKEND = "compiled"
    except ImportError:
        from dispkit._kernels import _pykernels as _impl

        KERNEL_BACKEND = "pure"

matmul_f64 = _impl.matmul_f64
matmul_obj = _impl.matmul_obj
jacobi_svd = _impl.jacobi_svd
bareiss_rank = _impl.bareiss_rank
