"""Dense Gaussian projection G @ A without materializing G.

Worker-local slices of G are drawn on the fly, keyed by (64-row chunk, input
row), so the output is bitwise-identical for any worker count. The result is
column-major (the kernels write its transposed row-major view); use
DenseMatrix.to_layout or numpy's ascontiguousarray to convert.
"""

import numpy as np

from . import backend, rng
from .errors import InputError
from .matrix import CsrMatrix, as_dense_array


def sketch_gaussian_csr(A, m, seed=0, scaled=True, counters=None):
    """C = G @ A for CSR A; G is m x n with N(0,1) entries, 1/sqrt(m) optional."""
    if m < 1:
        raise InputError("m must be >= 1")
    if not isinstance(A, CsrMatrix):
        raise InputError("sketch_gaussian_csr expects a CsrMatrix")
    out = np.zeros((m, A.ncols), order="F")
    scale = 1.0 / np.sqrt(m) if scaled else 1.0
    macs = backend.kernels().gauss_csr(np.uint64(seed & (2**64 - 1)),
                                       np.uint64(rng.KIND_GAUSS_SKETCH),
                                       m, A.rowptr, A.colidx, A.values,
                                       float(scale), out.T)
    if counters is not None:
        counters.add(macs=macs, flops=2 * macs, rng_draws=m * A.nrows,
                     aux_bytes=min(64, m) * 8 * backend.get_num_threads())
    return out


def sketch_gaussian_dense(A, m, seed=0, scaled=True, counters=None):
    """Dense-input variant; bitwise-equal to the CSR path on the same pattern."""
    if m < 1:
        raise InputError("m must be >= 1")
    a = np.ascontiguousarray(as_dense_array(A))
    out = np.zeros((m, a.shape[1]), order="F")
    scale = 1.0 / np.sqrt(m) if scaled else 1.0
    macs = backend.kernels().gauss_dense(np.uint64(seed & (2**64 - 1)),
                                         np.uint64(rng.KIND_GAUSS_SKETCH),
                                         m, a, float(scale), out.T)
    if counters is not None:
        counters.add(macs=macs, flops=2 * macs, rng_draws=m * a.shape[0],
                     aux_bytes=min(64, m) * 8 * backend.get_num_threads())
    return out
