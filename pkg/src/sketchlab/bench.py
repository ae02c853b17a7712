"""Bench harness: 15 timed repetitions (3 rounds of 5) per kernel after one
excluded warm-up, reported per repetition to CSV plus a min/median summary.
Compares the numba and numpy backends side by side when both are available.
"""

import statistics
import time

import numpy as np

from . import backend
from .countsketch import multiply_gsa
from .errors import InputError
from .gaussian import sketch_gaussian_csr, sketch_gaussian_dense
from .gen import generate
from .gram import gram
from .instrument import Counters
from .matrix import CsrMatrix, SketchConfig
from .rownorms import sqn_csr, sqn_dense

ROUNDS = 3
ITERS_PER_ROUND = 5

REPORT_COLUMNS = ("operation", "backend", "preset", "n", "d", "m", "r",
                  "threads", "round", "rep", "wall_ms", "flops", "aux_bytes")


def parse_dim(token, d, k):
    """Sketch-size vocabulary: plain ints, '2d', '10k', 'd2', 'k2'."""
    t = str(token).strip().lower().removesuffix("-preset")
    if t in ("d2", "dd"):
        return d * d
    if t == "k2":
        return k * k
    try:
        return int(t)
    except ValueError:
        pass
    for suffix, dim in (("d", d), ("k", k)):
        if t.endswith(suffix):
            head = t[:-1] or "1"
            try:
                return int(head) * dim
            except ValueError:
                break
    raise InputError(f"cannot parse sketch size {token!r} (int, '2d', '10k', 'd2')")


def _ops(A, m, r, seed, workers):
    sparse = isinstance(A, CsrMatrix)
    d = A.ncols if sparse else A.shape[1]
    cfg = SketchConfig(m=m, r=r, seed=seed)
    cfg0 = SketchConfig(m=0, r=r, seed=seed)
    bmat = np.random.default_rng(seed).standard_normal((d, min(d, 64)))
    ops = {}
    if sparse:
        ops["sketch-gauss"] = lambda c: sketch_gaussian_csr(A, m, seed=seed, counters=c)
        ops["gram-serial"] = lambda c: gram(A, algo="serial", counters=c)
        ops["gram-lowmem"] = lambda c: gram(A, algo="lowmem", workers=workers, counters=c)
        ops["gram-rowpart"] = lambda c: gram(A, algo="rowpart", workers=workers, counters=c)
        ops["rownorms"] = lambda c: sqn_csr(A, bmat, counters=c)
    else:
        ops["sketch-gauss"] = lambda c: sketch_gaussian_dense(A, m, seed=seed, counters=c)
        ops["rownorms"] = lambda c: sqn_dense(A, bmat, counters=c)
    ops["sketch-cs"] = lambda c: multiply_gsa(A, cfg0, counters=c)
    ops["sketch-cg"] = lambda c: multiply_gsa(A, cfg, counters=c)
    return ops


def run_bench(operations, preset="tall-sparse", scale=256, m="2k", r="10k",
              k=0, threads=(1,), backends=None, seed=0):
    """Returns (rows, summary): per-repetition report rows and min/median."""
    A = generate(preset, scale=scale, seed=seed)
    sparse = isinstance(A, CsrMatrix)
    n, d = (A.nrows, A.ncols) if sparse else A.shape
    k = k or d
    m_val, r_val = parse_dim(m, d, k), parse_dim(r, d, k)
    if backends is None:
        backends = ("numba", "numpy") if backend.HAVE_NUMBA else ("numpy",)
    rows, summary = [], []
    prev = backend.active()
    try:
        for bk in backends:
            backend.set_backend(bk)
            for t in threads:
                workers = max(1, int(t))
                backend.set_num_threads(workers)
                ops = _ops(A, m_val, r_val, seed, workers)
                names = list(ops) if operations in (None, "all", ["all"]) else list(operations)
                for name in names:
                    if name not in ops:
                        raise InputError(f"unknown bench op {name!r} (one of {sorted(ops)})")
                    fn = ops[name]
                    fn(Counters())  # warm-up, excluded
                    timings = []
                    for rnd in range(ROUNDS):
                        for it in range(ITERS_PER_ROUND):
                            c = Counters()
                            t0 = time.perf_counter()
                            fn(c)
                            dt = (time.perf_counter() - t0) * 1e3
                            timings.append(dt)
                            rows.append((name, bk, preset, n, d, m_val, r_val,
                                         workers, rnd, it, f"{dt:.3f}",
                                         c.flops, c.aux_bytes))
                    summary.append((name, bk, workers, min(timings),
                                    statistics.median(timings)))
    finally:
        backend.set_backend(prev)
    return rows, summary


def write_report(path, rows):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(",".join(REPORT_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(str(x) for x in row) + "\n")
