"""Least squares via the sketching kernels: three routes.

lstsq_gram         normal equations: pseudoinverse of A^T A from the gram
                   module, x = V sigma^+ V^T (A^T b).
lstsq_sketch_solve sketch-and-solve: shrink [A b] with countgauss, solve the
                   small problem by truncated SVD. Approximate.
lstsq_precond      sketch-and-precondition: N = V Sigma^-1 from the sketch's
                   SVD whitens A, then CGLS iterates on A N using only
                   products with A N and its transpose. m = 0 with r ~ 2d is
                   a valid cheap preconditioner.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .countsketch import multiply_gsa
from .errors import ConvergenceError, DimensionError
from .factor import truncated_svd
from .gram import gram_dense, gram_parallel_lowmem
from .matrix import CsrMatrix, as_dense_array


def _matvec(A, x):
    if isinstance(A, CsrMatrix):
        out = np.empty(A.nrows)
        backend.kernels().csr_matvec(A.rowptr, A.colidx, A.values, x, out)
        return out
    return as_dense_array(A) @ x


def _rmatvec(A, y):
    if isinstance(A, CsrMatrix):
        out = np.zeros(A.ncols)
        backend.kernels().csr_rmatvec(A.rowptr, A.colidx, A.values, y, out)
        return out
    return as_dense_array(A).T @ y


def _shape(A):
    return A.shape if isinstance(A, CsrMatrix) else as_dense_array(A).shape


def lstsq_gram(A, b, rcond=0.0, workers=None):
    """x = V Sigma^+ V^T A^T b with (V, Sigma) from the Gramian's SVD."""
    n, d = _shape(A)
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (n,):
        raise DimensionError(f"right-hand side must have length {n}")
    if isinstance(A, CsrMatrix):
        B = gram_parallel_lowmem(A, workers=workers)
    else:
        B = gram_dense(A)
    svd = truncated_svd(B, rcond)
    c = svd.vk.T @ _rmatvec(A, b)
    return svd.vk @ (c / svd.sigmak)


def lstsq_sketch_solve(A, b, cfg, scaled=True):
    """Approximate minimizer from the sketched stacked system GS [A b]."""
    n, d = _shape(A)
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (n,):
        raise DimensionError(f"right-hand side must have length {n}")
    if isinstance(A, CsrMatrix):
        stacked = A.append_column(b)
    else:
        stacked = np.column_stack([as_dense_array(A), b])
    sk = multiply_gsa(stacked, cfg, scaled=scaled)
    a_t, b_t = sk[:, :d], sk[:, d]
    svd = truncated_svd(a_t, cfg.rcond)
    return svd.vk @ ((svd.uk.T @ b_t) / svd.sigmak)


@dataclass(frozen=True)
class PrecondResult:
    x: np.ndarray
    iterations: int
    cond_estimate: float
    residuals: np.ndarray  # relative normal-equation residual per iteration


def cgls(A, b, n_right=None, tol=1e-10, maxit=100):
    """CGLS on min ||A N y - b||, x = N y; N = identity when n_right is None.

    Stops when ||(AN)^T (AN y - b)|| <= tol * ||(AN)^T b||. Raises
    ConvergenceError carrying the best iterate when maxit is exceeded.
    The Lanczos coefficients give an LSQR-style estimate of cond(A N).
    """
    n, d = _shape(A)

    def op(y):
        return _matvec(A, n_right @ y) if n_right is not None else _matvec(A, y)

    def opt(u):
        return (n_right.T @ _rmatvec(A, u)) if n_right is not None else _rmatvec(A, u)

    kdim = n_right.shape[1] if n_right is not None else d
    y = np.zeros(kdim)
    res = b.astype(np.float64, copy=True)
    s = opt(res)
    gamma = float(s @ s)
    snorm0 = np.sqrt(gamma)
    p = s.copy()
    hist = []
    alphas, betas = [], []
    best_y, best_norm, best_it = y.copy(), snorm0, 0
    if snorm0 == 0.0:
        x = n_right @ y if n_right is not None else y
        return PrecondResult(x, 0, 1.0, np.zeros(0))
    for it in range(1, maxit + 1):
        q = op(p)
        qq = float(q @ q)
        if qq == 0.0:
            break
        alpha = gamma / qq
        y += alpha * p
        res -= alpha * q
        s = opt(res)
        gamma_new = float(s @ s)
        snorm = np.sqrt(gamma_new)
        hist.append(snorm / snorm0)
        alphas.append(alpha)
        betas.append(gamma_new / gamma)
        if snorm < best_norm:
            best_y, best_norm, best_it = y.copy(), snorm, it
        if snorm <= tol * snorm0:
            x = n_right @ y if n_right is not None else y
            return PrecondResult(x, it, _cond_from_cg(alphas, betas),
                                 np.asarray(hist))
        beta = gamma_new / gamma
        gamma = gamma_new
        p = s + beta * p
    x_best = n_right @ best_y if n_right is not None else best_y
    raise ConvergenceError(
        f"cgls: no convergence to {tol:g} within {maxit} iterations "
        f"(best relative normal residual {best_norm / snorm0:.3e})",
        best=x_best, iterations=best_it, residual=best_norm / snorm0)


def _cond_from_cg(alphas, betas):
    """sqrt of the extreme Ritz values of the CG tridiagonal (LSQR-style)."""
    k = len(alphas)
    if k == 0:
        return 1.0
    diag = np.empty(k)
    off = np.empty(max(k - 1, 0))
    diag[0] = 1.0 / alphas[0]
    for j in range(1, k):
        diag[j] = 1.0 / alphas[j] + betas[j - 1] / alphas[j - 1]
        off[j - 1] = np.sqrt(betas[j - 1]) / alphas[j - 1]
    t = np.diag(diag)
    if k > 1:
        t += np.diag(off, 1) + np.diag(off, -1)
    ev = np.linalg.eigvalsh(t)
    ev = ev[ev > 0.0]
    if ev.size == 0:
        return 1.0
    return float(np.sqrt(ev.max() / ev.min()))


def lstsq_precond(A, b, cfg, tol=1e-10, maxit=100, scaled=True):
    """Sketch, whiten, then iterate: x = N y*, N = V Sigma^-1 of the sketch."""
    n, d = _shape(A)
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (n,):
        raise DimensionError(f"right-hand side must have length {n}")
    sk = multiply_gsa(A, cfg, scaled=scaled)
    svd = truncated_svd(sk, cfg.rcond)
    n_right = svd.vk / svd.sigmak
    return cgls(A, b, n_right=n_right, tol=tol, maxit=maxit)
