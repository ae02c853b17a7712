"""Pure-numpy fallback kernels (SKETCHLAB_BACKEND=numpy).

Same signatures and same instrumented counts as the numba backend. The
vectorized forms keep the accumulation order of the jitted loops wherever a
bitwise contract depends on it (unbuffered np.add.at processes elements in
index order; the countgauss dense update is applied column by column). They
trade auxiliary memory for vectorization, e.g. the countsketch multiply
expands to nonzero granularity.
"""

import numpy as np

from . import rng as _rng


def _ranges(starts, counts):
    """Concatenation of arange(s, s + c) for each (s, c); zero counts allowed."""
    counts = np.asarray(counts, dtype=np.int64)
    nz = counts > 0
    starts = np.asarray(starts, dtype=np.int64)[nz]
    counts = counts[nz]
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    step = np.ones(total, dtype=np.int64)
    step[0] = starts[0]
    ends = np.cumsum(counts)[:-1]
    step[ends] = starts[1:] - (starts[:-1] + counts[:-1] - 1)
    return np.cumsum(step)


def rng_selftest(seed, kind, block, lane, count):
    base = _rng.stream_base_np(seed, kind, block, lane)
    ctr = np.arange(count, dtype=np.uint64)
    return _rng.raw64_np(base, ctr), _rng.normal_np(base, ctr)


# ---------------------------------------------------------------------------
# countsketch
# ---------------------------------------------------------------------------

def sa_csr(s_rowptr, s_cols, s_signs, row_lo, row_hi, a_rowptr, a_colidx, a_values, out):
    e0, e1 = int(s_rowptr[row_lo]), int(s_rowptr[row_hi])
    if e1 == e0:
        return 0
    cols = s_cols[e0:e1]
    signs = s_signs[e0:e1]
    srow = np.repeat(np.arange(row_lo, row_hi) - row_lo,
                     np.diff(s_rowptr[row_lo:row_hi + 1]))
    per_entry = a_rowptr[cols + 1] - a_rowptr[cols]
    idx = _ranges(a_rowptr[cols], per_entry)
    np.add.at(out, (np.repeat(srow, per_entry), a_colidx[idx]),
              np.repeat(signs, per_entry) * a_values[idx])
    return int(per_entry.sum())


def sa_dense(s_rowptr, s_cols, s_signs, row_lo, row_hi, a, out):
    d = a.shape[1]
    macs = 0
    for i in range(row_lo, row_hi):
        e0, e1 = int(s_rowptr[i]), int(s_rowptr[i + 1])
        if e1 == e0:
            continue
        out[i - row_lo] += s_signs[e0:e1] @ a[s_cols[e0:e1]]
        macs += (e1 - e0) * d
    return macs


def gemm_accum(g, bmat, out):
    # Column-by-column outer products keep the per-cell accumulation order of
    # the jitted kernel, hence bitwise batch invariance.
    for l in range(g.shape[1]):
        out += np.multiply.outer(g[:, l], bmat[l])


# ---------------------------------------------------------------------------
# Gaussian sketch
# ---------------------------------------------------------------------------

_LANE_GROUP = 4096


def _gauss_scatter(seed, kind, m, rowptr, colidx, values, scale, out_t):
    n = rowptr.shape[0] - 1
    row_nnz = np.diff(rowptr)
    nonempty = np.flatnonzero(row_nnz)
    macs = 0
    for c in range((m + 63) // 64):
        i0, i1 = 64 * c, min(m, 64 * c + 64)
        width = i1 - i0
        cols_i = np.arange(i0, i1)
        for g0 in range(0, len(nonempty), _LANE_GROUP):
            lanes = nonempty[g0:g0 + _LANE_GROUP]
            base = _rng.stream_base_np(seed, kind, c, lanes[:, None])
            gblk = _rng.normal_np(base, np.arange(width, dtype=np.uint64)[None, :])
            if scale != 1.0:
                gblk = gblk * scale
            cnt = row_nnz[lanes]
            idx = _ranges(rowptr[lanes], cnt)
            lane_of = np.repeat(np.arange(len(lanes)), cnt)
            np.add.at(out_t, (colidx[idx][:, None], cols_i[None, :]),
                      values[idx][:, None] * gblk[lane_of])
            macs += int(cnt.sum()) * width
    return macs


def gauss_csr(seed, kind, m, a_rowptr, a_colidx, a_values, scale, out_t):
    return _gauss_scatter(seed, kind, m, a_rowptr, a_colidx, a_values, scale, out_t)


def gauss_dense(seed, kind, m, a, scale, out_t):
    # Same scatter path over the dense matrix's nonzero pattern, so the csr
    # and dense variants agree bitwise for the csr form of the same matrix.
    rows, cols = np.nonzero(a)
    rowptr = np.zeros(a.shape[0] + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=a.shape[0]), out=rowptr[1:])
    return _gauss_scatter(seed, kind, m, rowptr, cols.astype(np.int64),
                          a[rows, cols], scale, out_t)


# ---------------------------------------------------------------------------
# Gram kernels
# ---------------------------------------------------------------------------

def _gram_pairs(a_rowptr, a_colidx, a_values, alpha, out, row_lo, row_hi):
    """All (k, h) index pairs per row, accumulated in (row, k, h) order."""
    w = np.diff(a_rowptr[row_lo:row_hi + 1])
    total = int((w * w).sum())
    if total == 0:
        return 0
    seg = _ranges(a_rowptr[row_lo:row_hi], w)          # nonzero indices, row order
    rep = np.repeat(w, w)                              # row width per nonzero
    k_idx = np.repeat(seg, rep)                        # k repeated w_i times
    h_idx = _ranges(np.repeat(a_rowptr[row_lo:row_hi], w), rep)  # row range tiled
    np.add.at(out, (a_colidx[k_idx], a_colidx[h_idx]),
              (alpha * a_values[k_idx]) * a_values[h_idx])
    return total


def gram_serial(a_rowptr, a_colidx, a_values, alpha, out):
    n = a_rowptr.shape[0] - 1
    return _gram_pairs(a_rowptr, a_colidx, a_values, alpha, out, 0, n)


def gram_lowmem(a_rowptr, a_colidx, a_values, alpha, stripe_bounds, out):
    # The striped accumulation chains are identical to the serial ones cell
    # for cell (ascending input row), so the serial path is bitwise-exact for
    # every stripe count.
    return gram_serial(a_rowptr, a_colidx, a_values, alpha, out)


def gram_rowpart(a_rowptr, a_colidx, a_values, alpha, row_bounds, stripe_bounds, out):
    p = len(row_bounds) - 1
    d = out.shape[0]
    bufs = np.zeros((p, d, d))
    macs = 0
    for t in range(p):
        macs += _gram_pairs(a_rowptr, a_colidx, a_values, alpha, bufs[t],
                            int(row_bounds[t]), int(row_bounds[t + 1]))
    for t in range(p):
        lo, hi = int(stripe_bounds[t]), int(stripe_bounds[t + 1])
        for k in range(p):
            out[lo:hi] += bufs[k, lo:hi]
    return macs


# ---------------------------------------------------------------------------
# Squared row norms
# ---------------------------------------------------------------------------

def sqn_csr(a_rowptr, a_colidx, a_values, btilde, alpha, x):
    n = a_rowptr.shape[0] - 1
    w = np.diff(a_rowptr)
    pairs = w * w
    total = int(pairs.sum())
    if total == 0:
        return 0
    k_idx = np.repeat(_ranges(a_rowptr[:-1], w), np.repeat(w, w))
    h_idx = _ranges(np.repeat(a_rowptr[:-1], w), np.repeat(w, w))
    contrib = (alpha * a_values[k_idx]) * a_values[h_idx] * btilde[a_colidx[h_idx], a_colidx[k_idx]]
    np.add.at(x, np.repeat(np.arange(n), pairs), contrib)
    return total


_ROW_BLOCK = 4096


def sqn_dense(a, bmat, alpha, x):
    n, d = a.shape
    r = bmat.shape[1]
    for i0 in range(0, n, _ROW_BLOCK):
        t = a[i0:i0 + _ROW_BLOCK] @ bmat
        x[i0:i0 + _ROW_BLOCK] += alpha * np.einsum("ij,ij->i", t, t)
    return n * r * (2 * d - 1) if d else 0


# ---------------------------------------------------------------------------
# One-sided Jacobi sweeps
# ---------------------------------------------------------------------------

def jacobi_sweeps(wt, vt, eps, max_sweeps):
    n = wt.shape[0]
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                app = float(wt[p] @ wt[p])
                aqq = float(wt[q] @ wt[q])
                apq = float(wt[p] @ wt[q])
                if apq == 0.0 or abs(apq) <= eps * np.sqrt(app * aqq):
                    continue
                rotated = True
                tau = (aqq - app) / (2.0 * apq)
                t = np.copysign(1.0, tau) / (abs(tau) + np.hypot(1.0, tau)) \
                    if tau != 0.0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                wp = wt[p].copy()
                wt[p] = c * wp - s * wt[q]
                wt[q] = s * wp + c * wt[q]
                vp = vt[p].copy()
                vt[p] = c * vp - s * vt[q]
                vt[q] = s * vp + c * vt[q]
        if not rotated:
            return sweep + 1
    return -1


# ---------------------------------------------------------------------------
# Sparse matvecs
# ---------------------------------------------------------------------------

def csr_matvec(a_rowptr, a_colidx, a_values, xin, out):
    n = a_rowptr.shape[0] - 1
    out[:] = 0.0
    np.add.at(out, np.repeat(np.arange(n), np.diff(a_rowptr)),
              a_values * xin[a_colidx])


def csr_rmatvec(a_rowptr, a_colidx, a_values, xin, out):
    n = a_rowptr.shape[0] - 1
    np.add.at(out, a_colidx,
              a_values * np.repeat(xin, np.diff(a_rowptr)))


# ---------------------------------------------------------------------------
# Workload simulation
# ---------------------------------------------------------------------------

def balance_sim(seed, w, r, nworkers, trials, y):
    n = w.shape[0]
    bsz = r // nworkers
    lanes = np.arange(n, dtype=np.uint64)
    wf = w.astype(np.float64)
    for t in range(int(trials)):
        ts = _rng.trial_seed(int(seed), t)
        base = _rng.stream_base_np(ts, _rng.KIND_COUNTSKETCH, 0, lanes)
        rows = (_rng.raw64_np(base, 0) % np.uint64(r)).astype(np.int64)
        y[t] += np.bincount(rows // bsz, weights=wf, minlength=nworkers).astype(np.int64)
