"""Leverage scores over the dominant k-subspace, exact and sketched.

theta_i = ||e_i^T A V Sigma^-1||^2 with (V, Sigma^2) from the Gramian's SVD;
the row norms come from the squared-row-norms kernel, so the exact path costs
O(nnz2(A) + d^3). The sketched path replaces A by S A (r1 countsketch rows),
and compresses the orthogonalizer with a scaled k x r2 Gaussian projector.
The subset variants select k columns first and score the submatrix.
"""

from dataclasses import dataclass

import numpy as np

from . import rng
from .countsketch import multiply_gsa
from .errors import InputError
from .factor import truncated_svd
from .gram import gram_dense, gram_parallel_rowpart
from .matrix import CsrMatrix, as_dense_array
from .rownorms import sqn_csr, sqn_dense
from .subset import column_subset_select


@dataclass(frozen=True)
class LeverageScores:
    theta: np.ndarray
    k: int


def _sqn(A, B):
    if isinstance(A, CsrMatrix):
        return sqn_csr(A, B)
    return sqn_dense(as_dense_array(A), B)


def leverage_exact(A, rcond=0.0, workers=None):
    """Exact scores of the retained subspace via the Gram pseudoinverse."""
    if isinstance(A, CsrMatrix):
        B = gram_parallel_rowpart(A, workers=workers)
    else:
        B = gram_dense(as_dense_array(A))
    svd = truncated_svd(B, rcond)
    if svd.k == 0:
        n = A.nrows if isinstance(A, CsrMatrix) else as_dense_array(A).shape[0]
        return LeverageScores(np.zeros(n), 0)
    # Eigenvalues of A^T A are sigma(A)^2.
    orth = svd.vk / np.sqrt(svd.sigmak)
    return LeverageScores(_sqn(A, orth), svd.k)


def leverage_css_exact(A, cfg):
    """Scores of the best rank-k column subspace: select, then exact scores."""
    sel = column_subset_select(A, cfg)
    sub = A.select_columns(sel.selected) if isinstance(A, CsrMatrix) \
        else as_dense_array(A)[:, sel.selected]
    return leverage_exact(sub, cfg.rcond)


def leverage_sketched(A, rcond, cfg, pi_matrix=None):
    """Approximate scores via the sketched SVD.

    A_tilde = (G) S A with r1 = cfg.r rows (cfg.m = 0 gives the plain
    countsketch path); X = V_tilde Sigma_tilde^-1 Pi with Pi a k x r2
    Gaussian scaled by 1/sqrt(r2), r2 = cfg.r2 or ceil(8 ln n / eps^2) at
    eps = 1/2. pi_matrix injects Pi verbatim (tests).
    """
    n = A.nrows if isinstance(A, CsrMatrix) else as_dense_array(A).shape[0]
    sk = multiply_gsa(A, cfg)
    svd = truncated_svd(sk, rcond)
    if svd.k == 0:
        return LeverageScores(np.zeros(n), 0)
    whiten = svd.vk / svd.sigmak
    if pi_matrix is not None:
        pi = np.asarray(pi_matrix, dtype=np.float64)
        if pi.shape[0] != svd.k:
            raise InputError(f"projector must have {svd.k} rows")
    else:
        r2 = cfg.r2 if cfg.r2 else int(np.ceil(8.0 * np.log(max(n, 2)) / 0.25))
        pi = rng.gaussian_matrix(cfg.seed, rng.KIND_PROJECTOR, svd.k, r2,
                                 scale=1.0 / np.sqrt(r2))
    return LeverageScores(_sqn(A, whiten @ pi), svd.k)


def leverage_css_sketched(A, rcond, cfg, pi_matrix=None):
    """Approximate scores of the selected column subspace."""
    sel = column_subset_select(A, cfg)
    sub = A.select_columns(sel.selected) if isinstance(A, CsrMatrix) \
        else as_dense_array(A)[:, sel.selected]
    return leverage_sketched(sub, rcond, cfg, pi_matrix=pi_matrix)
