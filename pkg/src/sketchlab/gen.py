"""Preset test matrices mirroring the experiment shapes, at configurable scale.

Full-size presets (scale = 1): tall 2,097,152 x 512 (sparse at 5% density),
short 131,072 x 8,192 (sparse at 2.5%). --scale divides the row count only,
keeping the aspect of each shape; values are standard normal.
"""

import numpy as np

from .errors import InputError
from .matrix import CsrMatrix

PRESETS = {
    "tall-sparse": (2_097_152, 512, 0.05),
    "short-sparse": (131_072, 8_192, 0.025),
    "tall-dense": (2_097_152, 512, None),
    "short-dense": (131_072, 8_192, None),
}

_CHUNK_CELLS = 1 << 24


def preset_shape(preset, scale=1):
    if preset not in PRESETS:
        raise InputError(f"unknown preset {preset!r} (one of {sorted(PRESETS)})")
    if scale < 1:
        raise InputError("scale must be >= 1")
    n0, d, density = PRESETS[preset]
    n = max(1, n0 // scale)
    return n, d, density


def generate(preset, scale=1, seed=0):
    """CsrMatrix for sparse presets, row-major ndarray for dense ones."""
    n, d, density = preset_shape(preset, scale)
    gen = np.random.default_rng(seed)
    if density is None:
        return gen.standard_normal((n, d))
    rows_per_chunk = max(1, _CHUNK_CELLS // d)
    rowptr = np.zeros(n + 1, dtype=np.int64)
    cols_parts, vals_parts = [], []
    for lo in range(0, n, rows_per_chunk):
        hi = min(n, lo + rows_per_chunk)
        mask = gen.random((hi - lo, d)) < density
        rr, cc = np.nonzero(mask)
        cols_parts.append(cc.astype(np.int64))
        vals_parts.append(gen.standard_normal(len(cc)))
        rowptr[lo + 1:hi + 1] = rowptr[lo] + np.cumsum(
            np.bincount(rr, minlength=hi - lo))
    return CsrMatrix(n, d, rowptr, np.concatenate(cols_parts),
                     np.concatenate(vals_parts))
