"""B <- alpha * A^T A + beta * B for CSR A, three interchangeable algorithms.

serial   the row outer-product reference; exactly nnz2(A) accumulation MACs.
lowmem   workers own disjoint output-row stripes of B and binary search each
         input row's sorted index segment; no auxiliary numeric memory, no
         synchronization. Per-cell accumulation chains are identical to the
         serial ones, so the result is bitwise-equal to serial for any p.
rowpart  each worker grams a private row block into a p x d x d scratch, then
         a striped reduction; fastest for tall inputs, reassociates (kept
         within 1e-12 relative of serial).
"""

import numpy as np

from . import backend
from .errors import DimensionError, InputError
from .matrix import CsrMatrix, as_dense_array


def _bounds(total, parts):
    width = -(-total // parts) if parts else total
    b = np.minimum(np.arange(parts + 1, dtype=np.int64) * width, total)
    return b


def _prep(A, beta, out):
    if not isinstance(A, CsrMatrix):
        raise InputError("gram kernels expect a CsrMatrix (use gram_dense for arrays)")
    d = A.ncols
    if out is None:
        out = np.zeros((d, d))
        return out
    if out.shape != (d, d):
        raise DimensionError(f"output must be {d} x {d}")
    if beta == 0.0:
        out[:] = 0.0
    elif beta != 1.0:
        out *= beta
    return out


def gram_serial(A, alpha=1.0, beta=0.0, out=None, counters=None):
    out = _prep(A, beta, out)
    macs = 0
    if alpha != 0.0:
        macs = backend.kernels().gram_serial(A.rowptr, A.colidx, A.values,
                                             float(alpha), out)
    if counters is not None:
        counters.add(macs=macs, flops=2 * macs + A.nnz + A.ncols ** 2)
    return out


def gram_parallel_lowmem(A, alpha=1.0, beta=0.0, out=None, workers=None, counters=None):
    out = _prep(A, beta, out)
    p = workers or backend.default_workers()
    if p < 1:
        raise InputError("workers must be >= 1")
    macs = 0
    if alpha != 0.0:
        macs = backend.kernels().gram_lowmem(A.rowptr, A.colidx, A.values,
                                             float(alpha), _bounds(A.ncols, p), out)
    if counters is not None:
        counters.add(macs=macs, flops=2 * macs + A.nnz + A.ncols ** 2)
    return out


def gram_parallel_rowpart(A, alpha=1.0, beta=0.0, out=None, workers=None, counters=None):
    p = workers or backend.default_workers()
    if p < 1:
        raise InputError("workers must be >= 1")
    if p == 1:
        # Degenerate partition: the serial kernel is the exact same chain.
        return gram_serial(A, alpha, beta, out, counters)
    out = _prep(A, beta, out)
    macs = 0
    if alpha != 0.0:
        try:
            macs = backend.kernels().gram_rowpart(A.rowptr, A.colidx, A.values,
                                                  float(alpha), _bounds(A.nrows, p),
                                                  _bounds(A.ncols, p), out)
        except MemoryError as exc:
            from .errors import ResourceError

            raise ResourceError(f"cannot allocate {p} private {A.ncols}x{A.ncols} "
                                "buffers") from exc
    if counters is not None:
        counters.add(macs=macs, flops=2 * macs + A.nnz + A.ncols ** 2,
                     aux_bytes=p * A.ncols * A.ncols * 8)
    return out


_ALGOS = {
    "serial": gram_serial,
    "lowmem": gram_parallel_lowmem,
    "rowpart": gram_parallel_rowpart,
}


def gram(A, alpha=1.0, beta=0.0, out=None, algo="serial", workers=None, counters=None):
    if algo not in _ALGOS:
        raise InputError(f"unknown gram algorithm {algo!r} (serial | lowmem | rowpart)")
    if algo == "serial":
        return gram_serial(A, alpha, beta, out, counters)
    return _ALGOS[algo](A, alpha, beta, out, workers=workers, counters=counters)


def gram_dense(A, alpha=1.0, beta=0.0, out=None, counters=None):
    """Dense-input Gram, delegated to a blocked dense multiply."""
    a = as_dense_array(A)
    d = a.shape[1]
    if out is None:
        out = np.zeros((d, d))
    elif out.shape != (d, d):
        raise DimensionError(f"output must be {d} x {d}")
    if beta == 0.0:
        out[:] = 0.0
    elif beta != 1.0:
        out *= beta
    if alpha != 0.0:
        out += alpha * (a.T @ a)
    if counters is not None:
        counters.add(flops=2 * a.shape[0] * d * d)
    return out
