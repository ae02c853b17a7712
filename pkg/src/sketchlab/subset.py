"""Column subset selection through a countgauss sketch.

Sketch B = G S A down to m x d (or r x d when m = 0), run pivoted QR on B,
and keep the first k pivots. Practical sketch sizes are m ~ 2d, r ~ d^2.
"""

from dataclasses import dataclass

import numpy as np

from .countsketch import multiply_gsa
from .errors import InputError
from .factor import pivoted_qr, qr_rank
from .matrix import CsrMatrix, SketchConfig, as_dense_array


@dataclass(frozen=True)
class CssResult:
    selected: np.ndarray     # first k pivots, in pivot order
    permutation: np.ndarray  # full pivot order over [0, d)

    @property
    def k(self):
        return len(self.selected)


def default_css_config(d, seed=0, k=0, rcond=0.0):
    """The practical choice m ~ 2d, r ~ d^2."""
    return SketchConfig(m=2 * d, r=max(1, d * d), k=k, rcond=rcond, seed=seed)


def column_subset_select(A, cfg, s_sketch=None, g_matrix=None):
    """Rank-revealing selection of cfg.k columns (cfg.rcond decides if k = 0)."""
    d = A.ncols if isinstance(A, CsrMatrix) else as_dense_array(A).shape[1]
    if d < 1:
        raise InputError("matrix must have at least one column")
    b = multiply_gsa(A, cfg, s_sketch=s_sketch, g_matrix=g_matrix)
    r_mat, piv = pivoted_qr(b)
    k = cfg.k if cfg.k >= 1 else qr_rank(r_mat, cfg.rcond)
    if k > d:
        raise InputError(f"k = {k} exceeds the column count {d}")
    return CssResult(piv[:k].copy(), piv)
