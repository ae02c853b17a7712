"""x <- alpha * q + beta * x where q_i = ||(A @ B)_i,:||^2, without forming A @ B.

The CSR kernel computes Btilde = B @ B^T once (dense BLAS) and then evaluates
the per-row quadratic form over each row's nonzero pattern, Theta(nnz2(A))
accumulation work. The dense kernel goes row at a time through A @ B instead
(no Btilde, no product materialization), 2ndr - nr flops, which wins whenever
r < d. Rows are independent; scheduling is dynamic and write-disjoint.
"""

import numpy as np

from . import backend
from .errors import DimensionError, InputError
from .matrix import CsrMatrix, as_dense_array


def _prep_x(n, beta, x):
    if x is None:
        return np.zeros(n)
    if x.shape != (n,):
        raise DimensionError(f"x must have length {n}")
    if beta == 0.0:
        x[:] = 0.0
    elif beta != 1.0:
        x *= beta
    return x


def sqn_csr(A, B, alpha=1.0, beta=0.0, x=None, counters=None):
    if not isinstance(A, CsrMatrix):
        raise InputError("sqn_csr expects a CsrMatrix")
    b = np.ascontiguousarray(as_dense_array(B))
    if b.shape[0] != A.ncols:
        raise DimensionError(f"B must have {A.ncols} rows, got {b.shape[0]}")
    x = _prep_x(A.nrows, beta, x)
    macs = 0
    if alpha != 0.0:
        btilde = b @ b.T
        macs = backend.kernels().sqn_csr(A.rowptr, A.colidx, A.values,
                                         btilde, float(alpha), x)
    if counters is not None:
        r = b.shape[1]
        counters.add(macs=macs, flops=3 * macs + A.nnz + 2 * A.nrows
                     + (2 * r - 1) * A.ncols ** 2,
                     aux_bytes=A.ncols * A.ncols * 8)
    return x


def sqn_dense(A, B, alpha=1.0, beta=0.0, x=None, counters=None):
    a = np.ascontiguousarray(as_dense_array(A))
    b = np.ascontiguousarray(as_dense_array(B))
    if b.shape[0] != a.shape[1]:
        raise DimensionError(f"B must have {a.shape[1]} rows, got {b.shape[0]}")
    x = _prep_x(a.shape[0], beta, x)
    flops = 0
    if alpha != 0.0 and a.shape[1] > 0:
        flops = backend.kernels().sqn_dense(a, b, float(alpha), x)
    if counters is not None:
        counters.add(macs=flops, flops=flops)
    return x
