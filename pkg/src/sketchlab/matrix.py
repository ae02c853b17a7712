"""Matrix types shared by every kernel.

CsrMatrix is the canonical sparse container: 64-bit row pointers, 64-bit
column indices sorted strictly increasing within each row, float64 values,
no explicit zeros. Column order matters: the low-memory Gram kernel binary
searches each row's index segment.

Dense results are plain float64 ndarrays whose memory order is the layout tag
(C order = row-major, F order = column-major); DenseMatrix is a thin tagged
wrapper used at file and CLI boundaries where the layout must travel with the
data.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InputError

ROW_MAJOR = "row-major"
COL_MAJOR = "column-major"


class CsrMatrix:
    """Compressed sparse row matrix (values / column indices / row pointers)."""

    __slots__ = ("nrows", "ncols", "rowptr", "colidx", "values")

    def __init__(self, nrows, ncols, rowptr, colidx, values, validate=True):
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        self.rowptr = np.ascontiguousarray(rowptr, dtype=np.int64)
        self.colidx = np.ascontiguousarray(colidx, dtype=np.int64)
        self.values = np.ascontiguousarray(values, dtype=np.float64)
        if validate:
            self.validate()

    @property
    def nnz(self):
        return int(self.rowptr[-1])

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def row_nnz(self):
        return np.diff(self.rowptr)

    def validate(self):
        if self.nrows < 0 or self.ncols < 0:
            raise InputError("negative dimension")
        if self.rowptr.shape != (self.nrows + 1,):
            raise InputError("rowptr must have length nrows + 1")
        if self.rowptr[0] != 0:
            raise InputError("rowptr[0] must be 0")
        if np.any(np.diff(self.rowptr) < 0):
            raise InputError("rowptr must be non-decreasing")
        if self.rowptr[-1] != len(self.colidx) or len(self.colidx) != len(self.values):
            raise InputError("rowptr[-1], colidx and values lengths disagree")
        if self.nnz:
            if self.colidx.min() < 0 or self.colidx.max() >= self.ncols:
                raise InputError("column index out of range")
            # Strictly increasing within each row <=> increasing except at row starts.
            inner = np.ones(self.nnz, dtype=bool)
            starts = self.rowptr[1:-1]
            inner[starts[starts < self.nnz]] = False
            if np.any(np.diff(self.colidx)[inner[1:]] <= 0):
                raise InputError("column indices must be strictly increasing per row")
            if np.any(self.values == 0.0):
                raise InputError("explicit zeros are not stored")

    @classmethod
    def from_triplets(cls, nrows, ncols, triplets):
        return csr_from_triplets(nrows, ncols, triplets)

    @classmethod
    def from_dense(cls, a):
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2:
            raise InputError("expected a 2-d array")
        rows, cols = np.nonzero(a)
        rowptr = np.zeros(a.shape[0] + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=a.shape[0]), out=rowptr[1:])
        return cls(a.shape[0], a.shape[1], rowptr, cols.astype(np.int64), a[rows, cols])

    def to_dense(self):
        out = np.zeros((self.nrows, self.ncols))
        rows = np.repeat(np.arange(self.nrows), self.row_nnz())
        out[rows, self.colidx] = self.values
        return out

    def select_columns(self, cols):
        """Submatrix with the given columns, in the given order."""
        cols = np.asarray(cols, dtype=np.int64)
        if cols.size and (cols.min() < 0 or cols.max() >= self.ncols):
            raise InputError("column selection out of range")
        if len(np.unique(cols)) != len(cols):
            raise InputError("column selection must be distinct")
        newpos = np.full(self.ncols, -1, dtype=np.int64)
        newpos[cols] = np.arange(len(cols))
        mapped = newpos[self.colidx]
        keep = mapped >= 0
        rows = np.repeat(np.arange(self.nrows), self.row_nnz())[keep]
        order = np.lexsort((mapped[keep], rows))
        rowptr = np.zeros(self.nrows + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=self.nrows), out=rowptr[1:])
        return CsrMatrix(self.nrows, len(cols), rowptr,
                         mapped[keep][order], self.values[keep][order])

    def append_column(self, vec):
        """[A v] as CSR: v becomes column ncols, zeros dropped."""
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (self.nrows,):
            raise DimensionError("appended column length must equal nrows")
        extra = vec != 0.0
        counts = self.row_nnz() + extra
        rowptr = np.zeros(self.nrows + 1, dtype=np.int64)
        np.cumsum(counts, out=rowptr[1:])
        colidx = np.empty(rowptr[-1], dtype=np.int64)
        values = np.empty(rowptr[-1], dtype=np.float64)
        src = np.repeat(np.arange(self.nrows), self.row_nnz())
        dst = np.arange(self.nnz) + (rowptr[:-1] - self.rowptr[:-1])[src]
        colidx[dst] = self.colidx
        values[dst] = self.values
        tails = rowptr[1:][extra] - 1
        colidx[tails] = self.ncols
        values[tails] = vec[extra]
        return CsrMatrix(self.nrows, self.ncols + 1, rowptr, colidx, values)


def csr_from_triplets(nrows, ncols, triplets):
    """Canonical CSR from (row, col, value) triplets.

    Duplicates are summed; entries that sum to zero are dropped.
    """
    if len(triplets):
        rows = np.array([t[0] for t in triplets], dtype=np.int64)
        cols = np.array([t[1] for t in triplets], dtype=np.int64)
        vals = np.array([t[2] for t in triplets], dtype=np.float64)
    else:
        rows = np.empty(0, dtype=np.int64)
        cols = np.empty(0, dtype=np.int64)
        vals = np.empty(0, dtype=np.float64)
    return csr_from_arrays(nrows, ncols, rows, cols, vals)


def csr_from_arrays(nrows, ncols, rows, cols, vals):
    """Array-valued variant of csr_from_triplets (same canonicalization)."""
    if nrows < 0 or ncols < 0:
        raise InputError("negative dimension")
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if rows.size:
        if rows.min() < 0 or rows.max() >= nrows or cols.min() < 0 or cols.max() >= ncols:
            raise InputError("triplet index out of range")
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        boundary = np.ones(rows.size, dtype=bool)
        boundary[1:] = (np.diff(rows) != 0) | (np.diff(cols) != 0)
        starts = np.flatnonzero(boundary)
        vals = np.add.reduceat(vals, starts)
        rows, cols = rows[starts], cols[starts]
        keep = vals != 0.0
        rows, cols, vals = rows[keep], cols[keep], vals[keep]
    rowptr = np.zeros(nrows + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=nrows), out=rowptr[1:])
    return CsrMatrix(nrows, ncols, rowptr, cols, vals)


def nnz2(A):
    """Sum over rows of the squared per-row nonzero count."""
    w = A.row_nnz() if isinstance(A, CsrMatrix) else np.count_nonzero(np.asarray(A), axis=1)
    return int(np.sum(w.astype(np.int64) ** 2))


@dataclass(frozen=True)
class DenseMatrix:
    """Dense matrix with an explicit layout tag over flat storage."""

    nrows: int
    ncols: int
    layout: str
    data: np.ndarray

    def __post_init__(self):
        if self.layout not in (ROW_MAJOR, COL_MAJOR):
            raise InputError(f"unknown layout {self.layout!r}")
        if self.data.ndim != 1 or self.data.size != self.nrows * self.ncols:
            raise InputError("data must be flat with nrows * ncols elements")

    @classmethod
    def from_array(cls, a):
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2:
            raise InputError("expected a 2-d array")
        if a.flags.f_contiguous and not a.flags.c_contiguous:
            return cls(a.shape[0], a.shape[1], COL_MAJOR, a.reshape(-1, order="F"))
        return cls(a.shape[0], a.shape[1], ROW_MAJOR,
                   np.ascontiguousarray(a).reshape(-1))

    @property
    def array(self):
        """2-d view of the storage (no copy)."""
        if self.layout == ROW_MAJOR:
            return self.data.reshape(self.nrows, self.ncols)
        return self.data.reshape(self.ncols, self.nrows).T

    def item(self, i, j):
        if self.layout == ROW_MAJOR:
            return self.data[i * self.ncols + j]
        return self.data[j * self.nrows + i]

    def to_layout(self, layout):
        if layout == self.layout:
            return self
        order = "C" if layout == ROW_MAJOR else "F"
        return DenseMatrix(self.nrows, self.ncols, layout,
                           self.array.copy(order=order).reshape(-1, order=order))


def as_dense_array(M):
    """Accept DenseMatrix or ndarray; return the 2-d ndarray."""
    if isinstance(M, DenseMatrix):
        return M.array
    a = np.asarray(M, dtype=np.float64)
    if a.ndim != 2:
        raise InputError("expected a matrix")
    return a


@dataclass(frozen=True)
class SketchConfig:
    """Sketch dimensions and knobs shared by the application algorithms.

    m      rows of the Gaussian stage (0 skips it)
    r      rows of the countsketch stage
    k      target subspace dimension (0: derive from rcond)
    rcond  relative singular-value truncation threshold
    batch  countgauss batch size (0: min(d, r) at call time)
    seed   master seed
    r2     columns of the second projector in the sketched leverage-scores
           path (0: ceil(8 ln n / eps^2) with eps = 1/2 at call time)
    """

    m: int = 0
    r: int = 1
    k: int = 0
    rcond: float = 0.0
    batch: int = 0
    seed: int = 0
    r2: int = 0

    def __post_init__(self):
        if self.m < 0:
            raise InputError("m must be >= 0")
        if self.r < 1:
            raise InputError("r must be >= 1")
        if self.k < 0:
            raise InputError("k must be >= 0")
        if not 0.0 <= self.rcond < 1.0:
            raise InputError("rcond must be in [0, 1)")
        if self.batch < 0 or self.batch > self.r:
            raise InputError("batch must satisfy 1 <= batch <= r (0 = auto)")
        if self.r2 < 0:
            raise InputError("r2 must be >= 0")

    def batch_size(self, d):
        if self.batch:
            return self.batch
        return max(1, min(d, self.r))
