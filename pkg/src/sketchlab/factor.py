"""Small dense factorizations used by the application layer.

truncated_svd defaults to a self-contained one-sided Jacobi (column rotations
until all column pairs are numerically orthogonal); the "lapack" backend
delegates to numpy and doubles as the independent oracle in tests. pivoted_qr
is Householder with classical max-column-norm pivoting and norm downdating
(norms are recomputed when cancellation eats the downdated estimate).

Both run single-threaded: the inputs are the small sketched matrices.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import InputError, NumericError

_JACOBI_EPS = 1e-15
_MAX_SWEEPS = 60


@dataclass(frozen=True)
class SvdResult:
    """u * diag(sigma) * v.T with orthonormal columns; k = retained rank."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray
    k: int

    @property
    def uk(self):
        return self.u[:, :self.k]

    @property
    def vk(self):
        return self.v[:, :self.k]

    @property
    def sigmak(self):
        return self.sigma[:self.k]


def _jacobi(b):
    # Rows of wt are the columns being orthogonalized (contiguous access in
    # the sweep kernel); vt rows accumulate the right rotations. Always copy:
    # the sweeps rotate wt in place and must never touch the caller's array.
    n = b.shape[1]
    wt = np.array(b.T, dtype=np.float64, order="C", copy=True)
    vt = np.eye(n)
    sweeps = backend.kernels().jacobi_sweeps(wt, vt, _JACOBI_EPS, _MAX_SWEEPS)
    if sweeps < 0:
        raise NumericError("jacobi svd did not converge")
    sigma = np.sqrt((wt * wt).sum(axis=1))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    wt = wt[order]
    u = np.zeros_like(wt)
    nz = sigma > 0.0
    u[nz] = wt[nz] / sigma[nz, None]
    return u.T.copy(), sigma, vt[order].T.copy()


def truncated_svd(b, rcond=0.0, backend="jacobi"):
    """SVD with rank truncation: k = #{i : sigma_i > rcond * sigma_1}."""
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 2 or b.size == 0:
        raise InputError("expected a nonempty 2-d matrix")
    if not 0.0 <= rcond < 1.0:
        raise InputError("rcond must be in [0, 1)")
    transposed = b.shape[0] < b.shape[1]
    if transposed:
        b = b.T
    if backend == "jacobi":
        u, sigma, v = _jacobi(b)
    elif backend == "lapack":
        u, sigma, vt = np.linalg.svd(b, full_matrices=False)
        v = vt.T
    else:
        raise InputError(f"unknown svd backend {backend!r}")
    if transposed:
        u, v = v, u
    k = int(np.count_nonzero(sigma > rcond * sigma[0])) if sigma.size and sigma[0] > 0 else 0
    return SvdResult(u, sigma, v, k)


def pivoted_qr(b):
    """Householder QR with max-residual-norm column pivoting.

    Returns (R, piv): R upper triangular (min(m, n) x n of the permuted
    matrix), piv the full pivot order. Q is not formed; the callers only
    need the pivots and R's diagonal.
    """
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 2 or b.size == 0:
        raise InputError("expected a nonempty 2-d matrix")
    m, n = b.shape
    r = b.copy()
    piv = np.arange(n)
    norms2 = (r * r).sum(axis=0)
    ref2 = norms2.copy()
    steps = min(m, n)
    for j in range(steps):
        pvt = j + int(np.argmax(norms2[j:]))
        if pvt != j:
            r[:, [j, pvt]] = r[:, [pvt, j]]
            piv[[j, pvt]] = piv[[pvt, j]]
            norms2[[j, pvt]] = norms2[[pvt, j]]
            ref2[[j, pvt]] = ref2[[pvt, j]]
        x = r[j:, j]
        nx = np.linalg.norm(x)
        if nx == 0.0:
            norms2[j:] = 0.0
            continue
        v = x.copy()
        v[0] += np.copysign(nx, x[0] if x[0] != 0.0 else 1.0)
        v /= np.linalg.norm(v)
        r[j:, j:] -= 2.0 * np.outer(v, v @ r[j:, j:])
        r[j + 1:, j] = 0.0
        if j + 1 < n:
            norms2[j + 1:] -= r[j, j + 1:] ** 2
            # Downdating loses accuracy once most of the norm is consumed.
            stale = norms2[j + 1:] < 1e-10 * ref2[j + 1:]
            if np.any(stale):
                cols = j + 1 + np.flatnonzero(stale)
                fresh = (r[j + 1:, cols] ** 2).sum(axis=0)
                norms2[cols] = fresh
                ref2[cols] = fresh
    return r[:steps], piv


def qr_rank(r, rcond):
    """Numerical rank from the pivoted R diagonal."""
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] == 0.0:
        return 0
    return int(np.count_nonzero(diag > rcond * diag[0]))
