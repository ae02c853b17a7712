"""Block countsketch data structures and the SA / batched GSA kernels.

A countsketch has exactly one +-1 per column at a uniformly random row, so the
whole r x n matrix fits in one signed integer per column (the vector
representation, 1-based: v[k] = sign * (row + 1)). For parallel work the
matrix is partitioned into a b_r x b_c grid of blocks, each stored either as
unordered COO triplets or, when n_r == 1 (one row per block), as a sparse
vector of signed local column indices (the block-column variant, "bccs").

The multiply kernels consume a row-sorted view (rowptr / cols / signs over the
rows of the sketch) shared by both variants; row and sign draws are keyed by
column index, so construction and every product are independent of worker
count and of the block geometry.
"""

from dataclasses import dataclass

import numpy as np

from . import backend, rng
from .errors import DimensionError, InputError
from .matrix import CsrMatrix, SketchConfig, as_dense_array

VARIANT_COO = "coo"
VARIANT_BCCS = "bccs"


@dataclass(frozen=True)
class CooBlock:
    """Unordered-coordinate storage of one sketch block (local indices)."""

    rows: np.ndarray
    cols: np.ndarray
    signs: np.ndarray


class BlockCountSketch:
    """r x n countsketch stored as a 2-d grid of sparse blocks."""

    def __init__(self, r, n, n_r, n_c, variant, row_of_col, sign_of_col):
        if r < 1 or n < 1:
            raise InputError("countsketch dimensions must be >= 1")
        if not 1 <= n_r <= r or not 1 <= n_c <= n:
            raise InputError("block dimensions must satisfy 1 <= n_r <= r, 1 <= n_c <= n")
        if variant not in (VARIANT_COO, VARIANT_BCCS):
            raise InputError(f"unknown variant {variant!r}")
        if variant == VARIANT_BCCS and n_r != 1:
            raise InputError("bccs requires single-row blocks (n_r == 1)")
        self.r = int(r)
        self.n = int(n)
        self.n_r = int(n_r)
        self.n_c = int(n_c)
        self.b_r = -(-self.r // self.n_r)
        self.b_c = -(-self.n // self.n_c)
        self.variant = variant
        self.row_of_col = np.ascontiguousarray(row_of_col, dtype=np.int64)
        self.sign_of_col = np.ascontiguousarray(sign_of_col, dtype=np.float64)
        if self.row_of_col.shape != (self.n,) or self.sign_of_col.shape != (self.n,):
            raise InputError("need one (row, sign) pair per column")
        if self.row_of_col.min() < 0 or self.row_of_col.max() >= self.r:
            raise InputError("row index out of range")
        self._build_views()

    def _build_views(self):
        # Row-sorted kernel view: a CSR skeleton over the rows of the sketch.
        cols = np.arange(self.n, dtype=np.int64)
        order = np.lexsort((cols, self.row_of_col))
        self._s_cols = cols[order]
        self._s_signs = self.sign_of_col[order]
        self._s_rowptr = np.zeros(self.r + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.row_of_col, minlength=self.r), out=self._s_rowptr[1:])
        # Block grid per the declared variant.
        self.blocks = []
        if self.variant == VARIANT_COO:
            # lexsort keys are (minor ... major): row-block major, col-block minor.
            grid_order = np.lexsort((cols, cols // self.n_c, self.row_of_col // self.n_r))
            gr = self.row_of_col[grid_order]
            gc = cols[grid_order]
            gs = self.sign_of_col[grid_order]
            key = (gr // self.n_r) * self.b_c + gc // self.n_c
            bounds = np.searchsorted(key, np.arange(self.b_r * self.b_c + 1))
            for bi in range(self.b_r):
                row = []
                for bj in range(self.b_c):
                    o0, o1 = bounds[bi * self.b_c + bj], bounds[bi * self.b_c + bj + 1]
                    row.append(CooBlock(gr[o0:o1] - bi * self.n_r,
                                        gc[o0:o1] - bj * self.n_c,
                                        gs[o0:o1]))
                self.blocks.append(row)
        else:
            # One row per block: signed 1-based local column indices.
            for i in range(self.r):
                o0, o1 = self._s_rowptr[i], self._s_rowptr[i + 1]
                row = []
                for bj in range(self.b_c):
                    lo, hi = bj * self.n_c, min((bj + 1) * self.n_c, self.n)
                    j0, j1 = np.searchsorted(self._s_cols[o0:o1], [lo, hi])
                    loc = self._s_cols[o0 + j0:o0 + j1] - lo + 1
                    row.append((loc * self._s_signs[o0 + j0:o0 + j1]).astype(np.int64))
                self.blocks.append(row)

    @property
    def shape(self):
        return (self.r, self.n)

    def storage_counts(self):
        """(index words, block handles) held by the block grid."""
        if self.variant == VARIANT_COO:
            words = sum(2 * len(b.rows) for row in self.blocks for b in row)
            handles = self.b_r * self.b_c
        else:
            words = sum(len(b) for row in self.blocks for b in row)
            handles = self.r * self.b_c
        return words, handles

    def densify(self):
        out = np.zeros((self.r, self.n))
        out[self.row_of_col, np.arange(self.n)] = self.sign_of_col
        return out


def build_countsketch(r, n, n_r=0, n_c=0, variant=VARIANT_COO, seed=0):
    """Draw and populate a block countsketch.

    Column k takes its row from randi(r) and its sign from randb, both keyed
    by k, so the result is identical for any worker count. Defaults: COO row
    blocks sized for the logical worker count with a single column block;
    bccs fixes n_r = 1.
    """
    if r < 1 or n < 1:
        raise InputError("countsketch dimensions must be >= 1")
    if variant == VARIANT_BCCS:
        n_r = 1
    elif n_r == 0:
        n_r = -(-r // backend.default_workers())
    if n_c == 0:
        n_c = n
    rows, signs = rng.countsketch_draws(seed, n, r)
    return BlockCountSketch(r, n, n_r, n_c, variant, rows, signs)


def to_vector(S):
    """Signed 1-based vector representation: v[k] = sign * (row + 1)."""
    return ((S.row_of_col + 1) * S.sign_of_col).astype(np.int64)


def from_vector(v, n_r=0, n_c=0, variant=VARIANT_COO, r=None):
    v = np.asarray(v, dtype=np.int64)
    if v.ndim != 1 or v.size == 0:
        raise InputError("vector representation must be a nonempty 1-d array")
    if np.any(v == 0):
        raise InputError("vector entries are signed 1-based rows; 0 is invalid")
    rows = np.abs(v) - 1
    if r is None:
        r = int(rows.max()) + 1
    elif rows.max() >= r:
        raise InputError("|v[k]| exceeds the declared row count")
    n = v.size
    if variant == VARIANT_BCCS:
        n_r = 1
    elif n_r == 0:
        n_r = -(-r // backend.default_workers())
    if n_c == 0:
        n_c = n
    return BlockCountSketch(r, n, n_r, n_c, variant, rows, np.sign(v).astype(np.float64))


def sa_row_work(S, A):
    """Per-sketch-row contribution counts of the SA product (nnz of A rows)."""
    w = A.row_nnz() if isinstance(A, CsrMatrix) else np.full(S.n, as_dense_array(A).shape[1])
    per_entry = w[S._s_cols]
    out = np.zeros(S.r, dtype=np.int64)
    np.add.at(out, np.repeat(np.arange(S.r), np.diff(S._s_rowptr)), per_entry)
    return out


def multiply_sa(S, A, row_lo=0, row_hi=None, out=None, counters=None):
    """Dense row-major product S[row_lo:row_hi] @ A.

    Each row of A joins exactly one output row, so the instrumented
    contribution count equals nnz(A) over the full row range.
    """
    k = backend.kernels()
    if row_hi is None:
        row_hi = S.r
    if not 0 <= row_lo <= row_hi <= S.r:
        raise InputError("bad row range")
    if isinstance(A, CsrMatrix):
        if S.n != A.nrows:
            raise DimensionError(f"sketch has {S.n} columns, matrix has {A.nrows} rows")
        d = A.ncols
        if out is None:
            out = np.zeros((row_hi - row_lo, d))
        macs = k.sa_csr(S._s_rowptr, S._s_cols, S._s_signs, row_lo, row_hi,
                        A.rowptr, A.colidx, A.values, out)
    else:
        a = as_dense_array(A)
        if S.n != a.shape[0]:
            raise DimensionError(f"sketch has {S.n} columns, matrix has {a.shape[0]} rows")
        a = np.ascontiguousarray(a)
        if out is None:
            out = np.zeros((row_hi - row_lo, a.shape[1]))
        macs = k.sa_dense(S._s_rowptr, S._s_cols, S._s_signs, row_lo, row_hi, a, out)
    if counters is not None:
        counters.add(macs=macs, flops=macs, rng_draws=0)
    return out


def multiply_gsa(A, cfg, variant=VARIANT_COO, scaled=True, s_sketch=None,
                 g_matrix=None, counters=None):
    """Batched countgauss product C = G @ (S @ A), C zero-initialized.

    G is m x r with N(0, 1) entries (scaled by 1/sqrt(m) when `scaled`),
    drawn in column batches keyed by absolute column, so any batch size gives
    bitwise-identical output. cfg.m == 0 skips G and returns S @ A. Test
    hooks: s_sketch injects the countsketch, g_matrix injects G verbatim.
    """
    if not isinstance(cfg, SketchConfig):
        raise InputError("cfg must be a SketchConfig")
    n = A.nrows if isinstance(A, CsrMatrix) else as_dense_array(A).shape[0]
    d = A.ncols if isinstance(A, CsrMatrix) else as_dense_array(A).shape[1]
    S = s_sketch if s_sketch is not None else build_countsketch(
        cfg.r, n, variant=variant, seed=cfg.seed)
    if S.n != n:
        raise DimensionError("sketch width does not match the matrix")
    r = S.r
    if cfg.m == 0 and g_matrix is None:
        return multiply_sa(S, A, counters=counters)
    m = cfg.m if g_matrix is None else g_matrix.shape[0]
    if g_matrix is not None and g_matrix.shape[1] != r:
        raise DimensionError("injected G must have r columns")
    b = min(cfg.batch_size(max(d, 1)), r)
    scale = (1.0 / np.sqrt(m)) if (scaled and g_matrix is None) else 1.0
    out = np.zeros((m, d))
    bbuf = np.empty((b, d))
    k = backend.kernels()
    macs = 0
    for lo in range(0, r, b):
        hi = min(lo + b, r)
        cur = bbuf[:hi - lo]
        cur[:] = 0.0
        macs += _sa_into(S, A, lo, hi, cur, k)
        if g_matrix is not None:
            gb = np.ascontiguousarray(g_matrix[:, lo:hi])
        else:
            gb = rng.gaussian_matrix(cfg.seed, rng.KIND_COUNTGAUSS, m, hi - lo,
                                     col_offset=lo, scale=scale)
        k.gemm_accum(gb, cur, out)
    if counters is not None:
        counters.add(macs=macs, flops=macs + (2 * r - 1) * m * d,
                     rng_draws=m * r + 2 * n,
                     aux_bytes=(m + d) * b * 8)
    return out


def _sa_into(S, A, lo, hi, out, k):
    if isinstance(A, CsrMatrix):
        return k.sa_csr(S._s_rowptr, S._s_cols, S._s_signs, lo, hi,
                        A.rowptr, A.colidx, A.values, out)
    a = np.ascontiguousarray(as_dense_array(A))
    return k.sa_dense(S._s_rowptr, S._s_cols, S._s_signs, lo, hi, a, out)
