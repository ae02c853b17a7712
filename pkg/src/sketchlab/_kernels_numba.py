"""numba-jitted kernels (default backend).

Loop nests are written so that every output cell is accumulated by exactly one
prange iteration, in a fixed order (ascending input row, then entry order).
That makes every kernel bitwise-reproducible for a fixed seed regardless of
the thread count, and the countgauss accumulation bitwise-invariant to the
batch size. No fastmath anywhere: reassociation would break those contracts.

Each kernel returns its instrumented operation count (multiply-accumulate
iterations actually executed by the accumulation loops).
"""

import math

import numpy as np
from numba import njit, prange

from . import rng as _rng

_U0 = np.uint64(0)
_U1 = np.uint64(1)
_U2 = np.uint64(2)
_U63 = np.uint64(63)
_GOLDEN = np.uint64(_rng.GOLDEN)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_SEED_SALT = np.uint64(0x5851F42D4C957F2D)
_BLOCK_SALT = np.uint64(0xC2B2AE3D27D4EB4F)
_LANE_SALT = np.uint64(0x165667B19E3779F9)
_KIND_TRIAL = np.uint64(_rng.KIND_TRIAL)
_KIND_CS = np.uint64(_rng.KIND_COUNTSKETCH)
_TWO_PI = _rng.TWO_PI
_U53 = 2.0 ** -53


@njit(cache=True, inline="always")
def _mix64(x):
    x ^= x >> np.uint64(30)
    x *= _MIX1
    x ^= x >> np.uint64(27)
    x *= _MIX2
    x ^= x >> np.uint64(31)
    return x


@njit(cache=True, inline="always")
def _stream_base(seed, kind, block, lane):
    h = _mix64(seed ^ _SEED_SALT)
    h = _mix64(h ^ (kind * _GOLDEN))
    h = _mix64(h ^ (block * _BLOCK_SALT))
    h = _mix64(h ^ (lane * _LANE_SALT))
    return h


@njit(cache=True, inline="always")
def _raw64(base, ctr):
    return _mix64(base + (ctr + _U1) * _GOLDEN)


@njit(cache=True, inline="always")
def _normal_at(base, idx):
    u1 = np.float64((_raw64(base, _U2 * idx) >> np.uint64(11)) + _U1) * _U53
    u2 = np.float64(_raw64(base, _U2 * idx + _U1) >> np.uint64(11)) * _U53
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)


@njit(cache=True)
def rng_selftest(seed, kind, block, lane, count):
    """Scalar draws for the cross-implementation consistency test."""
    base = _stream_base(seed, kind, block, lane)
    raws = np.empty(count, dtype=np.uint64)
    normals = np.empty(count, dtype=np.float64)
    for i in range(count):
        raws[i] = _raw64(base, np.uint64(i))
        normals[i] = _normal_at(base, np.uint64(i))
    return raws, normals


# ---------------------------------------------------------------------------
# countsketch
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def sa_csr(s_rowptr, s_cols, s_signs, row_lo, row_hi, a_rowptr, a_colidx, a_values, out):
    macs = np.int64(0)
    for i in prange(row_lo, row_hi):
        oi = i - row_lo
        cnt = np.int64(0)
        for e in range(s_rowptr[i], s_rowptr[i + 1]):
            k = s_cols[e]
            s = s_signs[e]
            for t in range(a_rowptr[k], a_rowptr[k + 1]):
                out[oi, a_colidx[t]] += s * a_values[t]
            cnt += a_rowptr[k + 1] - a_rowptr[k]
        macs += cnt
    return macs


@njit(cache=True, parallel=True)
def sa_dense(s_rowptr, s_cols, s_signs, row_lo, row_hi, a, out):
    d = a.shape[1]
    macs = np.int64(0)
    for i in prange(row_lo, row_hi):
        oi = i - row_lo
        cnt = np.int64(0)
        for e in range(s_rowptr[i], s_rowptr[i + 1]):
            k = s_cols[e]
            s = s_signs[e]
            for j in range(d):
                out[oi, j] += s * a[k, j]
            cnt += d
        macs += cnt
    return macs


@njit(cache=True, parallel=True)
def gemm_accum(g, bmat, out):
    """out += g @ bmat, accumulated in ascending inner index per output row."""
    m, nb = g.shape
    d = bmat.shape[1]
    for i in prange(m):
        for l in range(nb):
            gl = g[i, l]
            for j in range(d):
                out[i, j] += gl * bmat[l, j]


# ---------------------------------------------------------------------------
# Gaussian sketch (the projector is never materialized)
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def gauss_csr(seed, kind, m, a_rowptr, a_colidx, a_values, scale, out_t):
    # out_t is the d x m transposed view of the column-major m x d result.
    n = a_rowptr.shape[0] - 1
    nchunks = (m + 63) // 64
    macs = np.int64(0)
    for c in prange(nchunks):
        i0 = c * 64
        i1 = min(m, i0 + 64)
        cnt = np.int64(0)
        for k in range(n):
            s0 = a_rowptr[k]
            s1 = a_rowptr[k + 1]
            if s1 == s0:
                continue
            base = _stream_base(seed, kind, np.uint64(c), np.uint64(k))
            for i in range(i0, i1):
                gi = _normal_at(base, np.uint64(i - i0)) * scale
                for t in range(s0, s1):
                    out_t[a_colidx[t], i] += gi * a_values[t]
            cnt += (i1 - i0) * (s1 - s0)
        macs += cnt
    return macs


@njit(cache=True, parallel=True)
def gauss_dense(seed, kind, m, a, scale, out_t):
    n, d = a.shape
    nchunks = (m + 63) // 64
    macs = np.int64(0)
    for c in prange(nchunks):
        i0 = c * 64
        i1 = min(m, i0 + 64)
        cnt = np.int64(0)
        for k in range(n):
            nzk = np.int64(0)
            for j in range(d):
                if a[k, j] != 0.0:
                    nzk += 1
            if nzk == 0:
                continue
            base = _stream_base(seed, kind, np.uint64(c), np.uint64(k))
            for i in range(i0, i1):
                gi = _normal_at(base, np.uint64(i - i0)) * scale
                for j in range(d):
                    v = a[k, j]
                    if v != 0.0:
                        out_t[j, i] += gi * v
            cnt += (i1 - i0) * nzk
        macs += cnt
    return macs


# ---------------------------------------------------------------------------
# Gram kernels
# ---------------------------------------------------------------------------

@njit(cache=True)
def gram_serial(a_rowptr, a_colidx, a_values, alpha, out):
    n = a_rowptr.shape[0] - 1
    macs = np.int64(0)
    for i in range(n):
        s0 = a_rowptr[i]
        s1 = a_rowptr[i + 1]
        for k in range(s0, s1):
            gam = alpha * a_values[k]
            ik = a_colidx[k]
            for h in range(s0, s1):
                out[ik, a_colidx[h]] += gam * a_values[h]
        w = s1 - s0
        macs += w * w
    return macs


@njit(cache=True, parallel=True)
def gram_lowmem(a_rowptr, a_colidx, a_values, alpha, stripe_bounds, out):
    # Worker t owns output rows [stripe_bounds[t], stripe_bounds[t+1]) and
    # binary searches each input row's sorted index segment for that range.
    n = a_rowptr.shape[0] - 1
    p = stripe_bounds.shape[0] - 1
    macs = np.int64(0)
    for t in prange(p):
        lo = stripe_bounds[t]
        hi = stripe_bounds[t + 1]
        cnt = np.int64(0)
        if hi > lo:
            for i in range(n):
                s0 = a_rowptr[i]
                s1 = a_rowptr[i + 1]
                if s1 == s0:
                    continue
                seg = a_colidx[s0:s1]
                ks = s0 + np.searchsorted(seg, lo)
                ke = s0 + np.searchsorted(seg, hi)
                for k in range(ks, ke):
                    gam = alpha * a_values[k]
                    ik = a_colidx[k]
                    for h in range(s0, s1):
                        out[ik, a_colidx[h]] += gam * a_values[h]
                cnt += (ke - ks) * (s1 - s0)
        macs += cnt
    return macs


@njit(cache=True, parallel=True)
def gram_rowpart(a_rowptr, a_colidx, a_values, alpha, row_bounds, stripe_bounds, out):
    # Private per-worker Gram of a row block, then a striped reduction.
    p = row_bounds.shape[0] - 1
    d = out.shape[0]
    bufs = np.zeros((p, d, d))
    macs = np.int64(0)
    for t in prange(p):
        cnt = np.int64(0)
        for i in range(row_bounds[t], row_bounds[t + 1]):
            s0 = a_rowptr[i]
            s1 = a_rowptr[i + 1]
            for k in range(s0, s1):
                gam = alpha * a_values[k]
                ik = a_colidx[k]
                for h in range(s0, s1):
                    bufs[t, ik, a_colidx[h]] += gam * a_values[h]
            w = s1 - s0
            cnt += w * w
        macs += cnt
    for t in prange(p):
        lo = stripe_bounds[t]
        hi = stripe_bounds[t + 1]
        for k in range(p):
            for i in range(lo, hi):
                for j in range(d):
                    out[i, j] += bufs[k, i, j]
    return macs


# ---------------------------------------------------------------------------
# Squared row norms
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def sqn_csr(a_rowptr, a_colidx, a_values, btilde, alpha, x):
    n = a_rowptr.shape[0] - 1
    macs = np.int64(0)
    for i in prange(n):
        s0 = a_rowptr[i]
        s1 = a_rowptr[i + 1]
        acc = 0.0
        for k in range(s0, s1):
            gam = alpha * a_values[k]
            jk = a_colidx[k]
            for j in range(s0, s1):
                acc += gam * a_values[j] * btilde[a_colidx[j], jk]
        x[i] += acc
        w = s1 - s0
        macs += w * w
    return macs


@njit(cache=True, parallel=True)
def sqn_dense(a, bmat, alpha, x):
    # Row at a time, no A @ B materialization; 2*d - 1 flops per product entry.
    n, d = a.shape
    r = bmat.shape[1]
    flops = np.int64(0)
    for i in prange(n):
        acc = 0.0
        for l in range(r):
            s = a[i, 0] * bmat[0, l]
            for k in range(1, d):
                s += a[i, k] * bmat[k, l]
            acc += s * s
        x[i] += alpha * acc
        flops += r * (2 * d - 1)
    return flops


# ---------------------------------------------------------------------------
# One-sided Jacobi sweeps (rows of wt are the columns being orthogonalized)
# ---------------------------------------------------------------------------

@njit(cache=True)
def jacobi_sweeps(wt, vt, eps, max_sweeps):
    n, m = wt.shape
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                app = 0.0
                aqq = 0.0
                apq = 0.0
                for i in range(m):
                    app += wt[p, i] * wt[p, i]
                    aqq += wt[q, i] * wt[q, i]
                    apq += wt[p, i] * wt[q, i]
                if apq == 0.0 or abs(apq) <= eps * math.sqrt(app * aqq):
                    continue
                rotated = True
                tau = (aqq - app) / (2.0 * apq)
                if tau != 0.0:
                    t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                else:
                    t = 1.0
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                for i in range(m):
                    wp = wt[p, i]
                    wt[p, i] = c * wp - s * wt[q, i]
                    wt[q, i] = s * wp + c * wt[q, i]
                for i in range(n):
                    vp = vt[p, i]
                    vt[p, i] = c * vp - s * vt[q, i]
                    vt[q, i] = s * vp + c * vt[q, i]
        if not rotated:
            return sweep + 1
    return -1


# ---------------------------------------------------------------------------
# Sparse matvecs (application layer)
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def csr_matvec(a_rowptr, a_colidx, a_values, xin, out):
    n = a_rowptr.shape[0] - 1
    for i in prange(n):
        s = 0.0
        for t in range(a_rowptr[i], a_rowptr[i + 1]):
            s += a_values[t] * xin[a_colidx[t]]
        out[i] = s


@njit(cache=True)
def csr_rmatvec(a_rowptr, a_colidx, a_values, xin, out):
    # Serial: scattered writes to out; caller zeroes out.
    n = a_rowptr.shape[0] - 1
    for i in range(n):
        xi = xin[i]
        if xi != 0.0:
            for t in range(a_rowptr[i], a_rowptr[i + 1]):
                out[a_colidx[t]] += a_values[t] * xi


# ---------------------------------------------------------------------------
# Workload simulation (balance lab)
# ---------------------------------------------------------------------------

@njit(cache=True, parallel=True)
def balance_sim(seed, w, r, nworkers, trials, y):
    """Per-trial, per-worker countsketch workloads; y is (trials, nworkers) int64.

    Trial t replays exactly the draws of a countsketch build with seed
    trial_seed(seed, t), so instrumented kernels can be checked against it.
    """
    n = w.shape[0]
    bsz = r // nworkers
    ru = np.uint64(r)
    for t in prange(trials):
        ts = _raw64(_stream_base(seed, _KIND_TRIAL, np.uint64(t), _U0), _U0)
        for k in range(n):
            base = _stream_base(ts, _KIND_CS, _U0, np.uint64(k))
            row = np.int64(_raw64(base, _U0) % ru)
            y[t, row // bsz] += w[k]
