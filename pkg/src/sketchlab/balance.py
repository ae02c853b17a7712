"""Monte-Carlo and instrumented validation of countsketch workload balance.

A worker that owns B = r/p rows of the sketch does Y = sum of w_k over the
columns k landing in its rows, where w_k = nnz(A_k,:). The closed forms are
mu = E[Y] = q nnz(A) and Var(Y) = q (1 - q) nnz2(A) with q = B/r = 1/p; the
tail checks compare empirical exceedance rates against the Chebyshev bound
(rate cap 1/n per fixed set) and two Hoeffding bounds (cap 2/n, derived under
q <= 1/2). Simulation trial t replays the draws of a countsketch built with
trial_seed(seed, t), so instrumented multiply counters can be wired in and
compared draw for draw.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .countsketch import build_countsketch, sa_row_work
from .errors import InputError
from .matrix import CsrMatrix

KIND_CHEBYSHEV = "chebyshev"
KIND_HOEFFDING_ABS = "hoeffding-absolute"
KIND_HOEFFDING_REL = "hoeffding-relative"


@dataclass(frozen=True)
class WorkloadSample:
    """Per-worker operation counts of one (simulated or instrumented) run."""

    n: int
    r: int
    p: int
    q: float
    w: np.ndarray
    per_worker: np.ndarray

    def total(self):
        return int(self.per_worker.sum())


@dataclass(frozen=True)
class BoundCheck:
    kind: str
    bound: float
    mu: float
    sigma2: float
    events: int
    violations: int
    violation_rate: float
    rate_cap: float          # per fixed-set bound: 1/n or 2/n
    mc_slack: float          # 3 binomial sigmas on the empirical rate
    simultaneous_rate: float  # all workers within the bound, per trial
    union_cap: float         # (1 - cap)^p

    @property
    def within_cap(self):
        return self.violation_rate <= self.rate_cap + self.mc_slack


def _check_wrp(w, r, p):
    w = np.ascontiguousarray(w, dtype=np.int64)
    if w.ndim != 1 or w.size == 0:
        raise InputError("row-nnz profile must be a nonempty 1-d array")
    if np.any(w < 0):
        raise InputError("row-nnz profile must be nonnegative")
    if r < 1 or p < 1:
        raise InputError("r and p must be >= 1")
    if r % p != 0:
        raise InputError(f"p = {p} must divide r = {r}")
    return w


def simulate_workload(w, r, p, trials, seed=0):
    """Monte-Carlo per-worker workloads, one WorkloadSample per trial."""
    w = _check_wrp(w, r, p)
    if trials < 1:
        raise InputError("trials must be >= 1")
    y = np.zeros((trials, p), dtype=np.int64)
    backend.kernels().balance_sim(np.uint64(seed & (2**64 - 1)), w, r, p, trials, y)
    q = 1.0 / p
    return [WorkloadSample(w.size, r, p, q, w, y[t]) for t in range(trials)]


def workload_from_multiply(A, r, p, seed=0):
    """Instrumented sample: per-worker row contributions of a real SA product."""
    if not isinstance(A, CsrMatrix):
        raise InputError("instrumented workloads need a CsrMatrix")
    if r % p != 0:
        raise InputError(f"p = {p} must divide r = {r}")
    S = build_countsketch(r, A.nrows, seed=seed)
    per_row = sa_row_work(S, A)
    per_worker = per_row.reshape(p, r // p).sum(axis=1)
    return WorkloadSample(A.nrows, r, p, 1.0 / p, A.row_nnz(), per_worker)


def _bound(kind, n, q, nnz, nnz2_):
    if kind == KIND_CHEBYSHEV:
        return math.sqrt(n * q * (1.0 - q) * nnz2_), 1.0 / n
    if kind in (KIND_HOEFFDING_ABS, KIND_HOEFFDING_REL):
        if q > 0.5:
            raise InputError("hoeffding bounds assume q <= 1/2 (p >= 2)")
        if kind == KIND_HOEFFDING_ABS:
            return (1.0 - q) * math.sqrt(2.0 * nnz2_ * math.log(n)), 2.0 / n
        mu = q * nnz
        return mu * math.sqrt(2.0 * ((1.0 - q) / q) ** 2 * math.log(n)), 2.0 / n
    raise InputError(f"unknown bound kind {kind!r}")


def check_tail_bounds(samples, kind):
    """Empirical exceedance rates of |Y - mu| against the chosen tail bound."""
    if not samples:
        raise InputError("need at least one sample")
    s0 = samples[0]
    n, q, p = s0.n, s0.q, s0.p
    nnz = int(s0.w.sum())
    nnz2_ = int((s0.w.astype(np.int64) ** 2).sum())
    mu = q * nnz
    sigma2 = q * (1.0 - q) * nnz2_
    bound, cap = _bound(kind, n, q, nnz, nnz2_)
    y = np.stack([s.per_worker for s in samples])
    exceed = np.abs(y - mu) > bound
    events = exceed.size
    violations = int(exceed.sum())
    rate = violations / events
    simultaneous = float(np.mean(~exceed.any(axis=1)))
    mc_slack = 3.0 * math.sqrt(cap * (1.0 - cap) / events)
    return BoundCheck(kind, bound, mu, sigma2, events, violations, rate, cap,
                      mc_slack, simultaneous, (1.0 - cap) ** p)
