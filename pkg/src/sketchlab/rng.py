"""Deterministic, partition-independent random streams.

Every random quantity in the package is a pure function of
(seed, kind, block, lane, counter): a splitmix64-style finalizer is applied to
a per-stream base hash plus a weighed counter. Because draws are keyed by the
logical work unit (a countsketch column, a 64-row chunk of a Gaussian matrix
times a column, a simulation trial) and never by a worker id, every kernel
produces bitwise-identical output for a fixed seed regardless of how the work
is partitioned.

Three generator kinds are exposed, mirroring the classic randb / randi / randn
trio: fair sign bits, uniform integers on [0, r), and standard normals via the
Box-Muller transform (two 64-bit words per normal). randi reduces a 64-bit
word modulo r; the bias is < r / 2**64, irrelevant at any tested scale.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError

_MASK = (1 << 64) - 1

GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_SEED_SALT = 0x5851F42D4C957F2D
_BLOCK_SALT = 0xC2B2AE3D27D4EB4F
_LANE_SALT = 0x165667B19E3779F9

# Stream kinds. Distinct kinds keep the draw spaces of unrelated kernels apart.
KIND_COUNTSKETCH = 1
KIND_GAUSS_SKETCH = 2
KIND_COUNTGAUSS = 3
KIND_PROJECTOR = 4
KIND_TRIAL = 5
KIND_GENERAL = 6

# Rows of implicit Gaussian matrices are keyed in fixed chunks of 64 so that
# the stream key never depends on the worker count.
GAUSS_CHUNK = 64

TWO_PI = 2.0 * math.pi
_U53 = 2.0 ** -53


def mix64(x):
    """splitmix64 finalizer on a python int (64-bit wrap semantics)."""
    x &= _MASK
    x ^= x >> 30
    x = (x * _MIX1) & _MASK
    x ^= x >> 27
    x = (x * _MIX2) & _MASK
    x ^= x >> 31
    return x


def stream_base(seed, kind, block, lane):
    h = mix64((seed & _MASK) ^ _SEED_SALT)
    h = mix64(h ^ ((kind * GOLDEN) & _MASK))
    h = mix64(h ^ ((block * _BLOCK_SALT) & _MASK))
    h = mix64(h ^ ((lane * _LANE_SALT) & _MASK))
    return h


def raw64(base, ctr):
    return mix64((base + (ctr + 1) * GOLDEN) & _MASK)


def _unit(u):
    # [0, 1)
    return (u >> 11) * _U53


def _unit_open(u):
    # (0, 1]
    return ((u >> 11) + 1) * _U53


def normal_at(base, idx):
    """idx-th standard normal of a stream; consumes counters 2*idx, 2*idx+1."""
    u1 = _unit_open(raw64(base, 2 * idx))
    u2 = _unit(raw64(base, 2 * idx + 1))
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(TWO_PI * u2)


@dataclass
class Stream:
    """A value-like random stream identified by (seed, kind, block, lane).

    Each draw advances a private counter; two Stream objects with the same key
    replay the same sequence, so any worker may rebuild any stream locally.
    """

    seed: int
    kind: int
    block: int = 0
    lane: int = 0
    _ctr: int = field(default=0, repr=False)

    def __post_init__(self):
        self._base = stream_base(self.seed, self.kind, self.block, self.lane)

    def randb(self):
        u = raw64(self._base, self._ctr)
        self._ctr += 1
        return bool(u >> 63)

    def randi(self, r):
        if r < 1:
            raise InputError(f"randi needs r >= 1, got {r}")
        u = raw64(self._base, self._ctr)
        self._ctr += 1
        return int(u % r)

    def randn(self):
        if self._ctr % 2:
            # Align to the pairwise Box-Muller counter layout.
            self._ctr += 1
        v = normal_at(self._base, self._ctr // 2)
        self._ctr += 2
        return v


def trial_seed(seed, trial):
    """Child seed for independent repetitions (balance lab, bench)."""
    return raw64(stream_base(seed, KIND_TRIAL, trial, 0), 0)


# ---------------------------------------------------------------------------
# Vectorized (numpy) evaluation of the same functions. Integer arithmetic is
# identical to the scalar path bit for bit; these are used for bulk draws and
# for materializing oracle matrices in tests.
# ---------------------------------------------------------------------------

_NP_GOLDEN = np.uint64(GOLDEN)
_NP_MIX1 = np.uint64(_MIX1)
_NP_MIX2 = np.uint64(_MIX2)
_NP_SEED_SALT = np.uint64(_SEED_SALT)
_NP_BLOCK_SALT = np.uint64(_BLOCK_SALT)
_NP_LANE_SALT = np.uint64(_LANE_SALT)


def mix64_np(x):
    # uint64 wraparound is the point; numpy warns on 0-d scalars only.
    with np.errstate(over="ignore"):
        x = x.astype(np.uint64, copy=True) if x.dtype != np.uint64 else x.copy()
        x ^= x >> np.uint64(30)
        x *= _NP_MIX1
        x ^= x >> np.uint64(27)
        x *= _NP_MIX2
        x ^= x >> np.uint64(31)
    return x


def stream_base_np(seed, kind, block, lane):
    seed = np.uint64(seed & _MASK)
    with np.errstate(over="ignore"):
        h = mix64_np(np.asarray(seed ^ _NP_SEED_SALT, dtype=np.uint64))
        h = mix64_np(h ^ (np.asarray(kind, dtype=np.uint64) * _NP_GOLDEN))
        h = mix64_np(h ^ (np.asarray(block, dtype=np.uint64) * _NP_BLOCK_SALT))
        h = mix64_np(h ^ (np.asarray(lane, dtype=np.uint64) * _NP_LANE_SALT))
    return h


def raw64_np(base, ctr):
    with np.errstate(over="ignore"):
        c = (np.asarray(ctr, dtype=np.uint64) + np.uint64(1)) * _NP_GOLDEN
        s = base + c
    return mix64_np(s)


def unit_np(u):
    return (u >> np.uint64(11)).astype(np.float64) * _U53


def unit_open_np(u):
    return ((u >> np.uint64(11)) + np.uint64(1)).astype(np.float64) * _U53


def normal_np(base, idx):
    idx = np.asarray(idx, dtype=np.uint64)
    u1 = unit_open_np(raw64_np(base, idx * np.uint64(2)))
    u2 = unit_np(raw64_np(base, idx * np.uint64(2) + np.uint64(1)))
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(TWO_PI * u2)


def countsketch_draws(seed, n, r):
    """Row index and sign per column of an r x n countsketch.

    Column k draws its row with randi(r) (counter 0) and its sign with randb
    (counter 1) from the stream (KIND_COUNTSKETCH, 0, k); exactly n randi and
    n randb draws total.
    """
    if r < 1 or n < 1:
        raise InputError("countsketch needs r >= 1 and n >= 1")
    lanes = np.arange(n, dtype=np.uint64)
    base = stream_base_np(seed, KIND_COUNTSKETCH, 0, lanes)
    rows = (raw64_np(base, 0) % np.uint64(r)).astype(np.int64)
    signs = np.where(raw64_np(base, 1) >> np.uint64(63), 1.0, -1.0)
    return rows, signs


def gaussian_matrix(seed, kind, nrows, ncols, col_offset=0, scale=1.0):
    """Materialize implicit Gaussian entries G[i, j + col_offset].

    Entry (i, j) is normal_at(stream (kind, i // 64, j), i % 64): identical
    values are produced whether the matrix is materialized whole, in column
    batches, or drawn entry-wise inside a kernel.
    """
    i = np.arange(nrows, dtype=np.uint64)[:, None]
    j = np.arange(col_offset, col_offset + ncols, dtype=np.uint64)[None, :]
    base = stream_base_np(seed, kind, i >> np.uint64(6), j)
    g = normal_np(base, np.broadcast_to(i & np.uint64(63), base.shape))
    if scale != 1.0:
        g = g * scale
    return g
