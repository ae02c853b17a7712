"""Command-line interface.

Subcommands: gen, sketch-gauss, sketch-cs, sketch-cg, gram, rownorms, css,
lstsq, leverage, balance, bench. Sparse matrices travel as Matrix Market
(.mtx), dense matrices and vectors as the 16-byte-header binary format
(.bin). --report appends a CSV row per repetition (bench: 15 per kernel).

The master seed comes from --seed or SKETCHLAB_SEED; the worker count from
--threads or SKETCHLAB_THREADS (logical partition count, clamped to the
physical pool for execution).
"""

import argparse
import os
import sys
import time

import numpy as np

from . import backend, bench as bench_mod, mmio
from .balance import (KIND_CHEBYSHEV, KIND_HOEFFDING_ABS, KIND_HOEFFDING_REL,
                      check_tail_bounds, simulate_workload)
from .countsketch import build_countsketch, multiply_gsa, multiply_sa
from .errors import SketchlabError
from .gaussian import sketch_gaussian_csr, sketch_gaussian_dense
from .gen import PRESETS, generate
from .gram import gram, gram_dense
from .instrument import Counters
from .leverage import (leverage_css_exact, leverage_css_sketched,
                       leverage_exact, leverage_sketched)
from .lstsq import lstsq_gram, lstsq_precond, lstsq_sketch_solve
from .matrix import CsrMatrix, DenseMatrix, SketchConfig
from .rownorms import sqn_csr, sqn_dense
from .subset import column_subset_select


def _env_int(name, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise SketchlabError(f"{name} must be an integer, got {raw!r}") from None


def _add_common(p, seed=True, threads=True, report=True):
    if seed:
        p.add_argument("--seed", type=int, default=None,
                       help="master seed (default: $SKETCHLAB_SEED or 0)")
    if threads:
        p.add_argument("--threads", type=int, default=None,
                       help="worker count (default: $SKETCHLAB_THREADS or auto)")
    if report:
        p.add_argument("--report", default=None, help="append a CSV timing report")


def _build_parser():
    ap = argparse.ArgumentParser(prog="sketchlab",
                                 description="randomized sketching kernels for "
                                             "tall-and-skinny matrices")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a preset test matrix")
    p.add_argument("preset", choices=sorted(PRESETS))
    p.add_argument("--scale", type=int, default=1, help="divide the row count")
    p.add_argument("--out", required=True, help=".mtx for sparse, .bin for dense")
    _add_common(p, threads=False, report=False)

    p = sub.add_parser("sketch-gauss", help="C = G A (column-major result)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--m", required=True)
    _scaled_flag(p)
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("sketch-cs", help="C = S A")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--variant", choices=("coo", "bccs"), default="coo")
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("sketch-cg", help="C = G S A (countgauss; --m 0 gives S A)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--m", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--batch", type=int, default=0)
    p.add_argument("--variant", choices=("coo", "bccs"), default="coo")
    _scaled_flag(p)
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("gram", help="C = alpha A^T A + beta C")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--gram-algo", choices=("serial", "lowmem", "rowpart"),
                   default="lowmem")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--accum", default=None, help="existing C for beta != 0")
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("rownorms", help="x = alpha |(A B)_i|^2 + beta x")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--b", dest="bfile", required=True, help="dense B (.bin)")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--accum", default=None, help="existing x for beta != 0")
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("css", help="column subset selection (pivot order file)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--m", default="2d")
    p.add_argument("--r", default="d2")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--rcond", type=float, default=0.0)
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("lstsq", help="least squares min |A x - b|")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--b", dest="bfile", required=True)
    p.add_argument("--algo", choices=("gram", "sketch", "precond"), default="gram")
    p.add_argument("--m", default="2d")
    p.add_argument("--r", default="d2")
    p.add_argument("--rcond", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--maxit", type=int, default=100)
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("leverage", help="leverage scores over the top subspace")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--algo", choices=("exact", "css-exact", "sketched",
                                      "css-sketched"), default="exact")
    p.add_argument("--m", default="0")
    p.add_argument("--r", default="d2")
    p.add_argument("--r2", type=int, default=0)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--rcond", type=float, default=0.0)
    p.add_argument("--out", required=True)
    _add_common(p)

    p = sub.add_parser("balance", help="workload-balance Monte-Carlo, CSV out")
    p.add_argument("--in", dest="infile", default=None,
                   help="take the row-nnz profile from this matrix")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--nnz-per-row", type=int, default=26)
    p.add_argument("--r", type=int, default=512)
    p.add_argument("--p", type=int, default=8)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--kind", choices=(KIND_CHEBYSHEV, KIND_HOEFFDING_ABS,
                                      KIND_HOEFFDING_REL),
                   default=KIND_HOEFFDING_ABS)
    p.add_argument("--out", required=True, help="per-trial CSV")
    _add_common(p, threads=False, report=False)

    p = sub.add_parser("bench", help="timing harness (3 rounds of 5 per kernel)")
    p.add_argument("operations", nargs="*", default=["all"],
                   help="kernels to time (default: all)")
    p.add_argument("--preset", choices=sorted(PRESETS), default="tall-sparse")
    p.add_argument("--scale", type=int, default=256)
    p.add_argument("--m", default="2k")
    p.add_argument("--r", default="10k")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--threads", default="1",
                   help="comma-separated worker counts, e.g. 1,4")
    p.add_argument("--backends", default=None,
                   help="comma-separated: numba,numpy (default: both present)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--report", required=True)
    return ap


def _scaled_flag(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--scaled", dest="scaled", action="store_true", default=True,
                   help="scale G by 1/sqrt(m) (default)")
    g.add_argument("--unscaled", dest="scaled", action="store_false")


def _seed_of(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    return _env_int("SKETCHLAB_SEED", 0)


def _workers_of(args):
    t = getattr(args, "threads", None)
    if t is None:
        t = _env_int("SKETCHLAB_THREADS", 0) or backend.max_threads()
    if t < 1:
        raise SketchlabError("--threads must be >= 1")
    backend.set_num_threads(t)
    return t


def _read_in(path):
    return mmio.read_any(path)


def _as_kernel_input(M):
    """mmio output to kernel input: CsrMatrix passes through, dense to array."""
    if isinstance(M, CsrMatrix):
        return M
    return M.array


def _write_matrix(path, arr):
    mmio.write_dense(path, DenseMatrix.from_array(np.ascontiguousarray(arr)))


def _report_row(path, op, n, d, m, r, threads, wall_ms, c):
    new = not os.path.exists(path)
    with open(path, "a", encoding="ascii") as fh:
        if new:
            fh.write(",".join(bench_mod.REPORT_COLUMNS) + "\n")
        fh.write(f"{op},{backend.active()},-,{n},{d},{m},{r},{threads},0,0,"
                 f"{wall_ms:.3f},{c.flops},{c.aux_bytes}\n")


def _parse_mr(args, d, k=None):
    k = k or getattr(args, "k", 0) or d
    m = bench_mod.parse_dim(getattr(args, "m", 0), d, k)
    r = bench_mod.parse_dim(getattr(args, "r", 1), d, k)
    return m, r


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except SketchlabError as exc:
        print(f"sketchlab: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"sketchlab: error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args):
    cmd = args.command
    if cmd == "gen":
        A = generate(args.preset, scale=args.scale, seed=_seed_of(args))
        if isinstance(A, CsrMatrix):
            if not args.out.endswith(".mtx"):
                raise SketchlabError("sparse presets write Matrix Market (.mtx)")
            mmio.write_matrix_market(args.out, A, comment=f"{args.preset} /{args.scale}")
        else:
            if not args.out.endswith(".bin"):
                raise SketchlabError("dense presets write binary dense (.bin)")
            _write_matrix(args.out, A)
        return 0

    if cmd == "bench":
        threads = [int(t) for t in str(args.threads).split(",") if t]
        backends = args.backends.split(",") if args.backends else None
        ops = args.operations if args.operations != ["all"] else "all"
        rows, summary = bench_mod.run_bench(
            ops, preset=args.preset, scale=args.scale, m=args.m, r=args.r,
            k=args.k, threads=threads, backends=backends,
            seed=args.seed if args.seed is not None else _env_int("SKETCHLAB_SEED", 0))
        bench_mod.write_report(args.report, rows)
        for name, bk, t, mn, med in summary:
            print(f"{name:14s} backend={bk:5s} threads={t}: "
                  f"min {mn:9.3f} ms   median {med:9.3f} ms")
        return 0

    if cmd == "balance":
        if args.infile:
            A = _read_in(args.infile)
            if not isinstance(A, CsrMatrix):
                raise SketchlabError("balance --in expects a sparse .mtx matrix")
            w = A.row_nnz()
        else:
            w = np.full(args.n, args.nnz_per_row, dtype=np.int64)
        samples = simulate_workload(w, args.r, args.p, args.trials,
                                    seed=_seed_of(args))
        chk = check_tail_bounds(samples, args.kind)
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write("trial,worker,Y,bound,violated\n")
            for t, s in enumerate(samples):
                for wk in range(s.p):
                    y = int(s.per_worker[wk])
                    v = int(abs(y - chk.mu) > chk.bound)
                    fh.write(f"{t},{wk},{y},{chk.bound:.3f},{v}\n")
        print(f"kind={chk.kind} mu={chk.mu:.1f} bound={chk.bound:.1f} "
              f"violation_rate={chk.violation_rate:.2e} cap={chk.rate_cap:.2e} "
              f"mc_slack={chk.mc_slack:.2e} simultaneous={chk.simultaneous_rate:.4f} "
              f"union_cap={chk.union_cap:.4f}")
        return 0

    # Kernel commands share the in/out + counters + report pattern.
    seed = _seed_of(args)
    workers = _workers_of(args)
    A = _as_kernel_input(_read_in(args.infile))
    n, d = (A.nrows, A.ncols) if isinstance(A, CsrMatrix) else A.shape
    c = Counters()
    t0 = time.perf_counter()
    m = r = 0

    if cmd == "sketch-gauss":
        m, _ = bench_mod.parse_dim(args.m, d, d), 0
        if isinstance(A, CsrMatrix):
            out = sketch_gaussian_csr(A, m, seed=seed, scaled=args.scaled, counters=c)
        else:
            out = sketch_gaussian_dense(A, m, seed=seed, scaled=args.scaled, counters=c)
        # Column-major result; the file format is row-major by definition.
        payload = out
    elif cmd == "sketch-cs":
        r = bench_mod.parse_dim(args.r, d, d)
        S = build_countsketch(r, n, variant=args.variant, seed=seed)
        payload = multiply_sa(S, A, counters=c)
    elif cmd == "sketch-cg":
        m, r = _parse_mr(args, d)
        cfg = SketchConfig(m=m, r=r, batch=args.batch, seed=seed)
        payload = multiply_gsa(A, cfg, variant=args.variant, scaled=args.scaled,
                               counters=c)
    elif cmd == "gram":
        accum = mmio.read_dense(args.accum).array.copy() if args.accum else None
        if isinstance(A, CsrMatrix):
            payload = gram(A, alpha=args.alpha, beta=args.beta, out=accum,
                           algo=args.gram_algo, workers=workers, counters=c)
        else:
            payload = gram_dense(A, alpha=args.alpha, beta=args.beta, out=accum,
                                 counters=c)
    elif cmd == "rownorms":
        bmat = mmio.read_dense(args.bfile).array
        x = mmio.read_vector(args.accum).copy() if args.accum else None
        if isinstance(A, CsrMatrix):
            payload = sqn_csr(A, bmat, alpha=args.alpha, beta=args.beta, x=x,
                              counters=c)
        else:
            payload = sqn_dense(A, bmat, alpha=args.alpha, beta=args.beta, x=x,
                                counters=c)
    elif cmd == "css":
        m, r = _parse_mr(args, d)
        cfg = SketchConfig(m=m, r=r, k=args.k, rcond=args.rcond, seed=seed)
        res = column_subset_select(A, cfg)
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(f"# selected {res.k} of {d}; pivot order, one per line\n")
            for idx in res.permutation:
                fh.write(f"{int(idx)}\n")
        _maybe_report(args, cmd, n, d, m, r, workers, t0, c)
        return 0
    elif cmd == "lstsq":
        b = mmio.read_vector(args.bfile)
        m, r = _parse_mr(args, d)
        cfg = SketchConfig(m=m, r=r, rcond=args.rcond, seed=seed)
        if args.algo == "gram":
            payload = lstsq_gram(A, b, rcond=args.rcond, workers=workers)
        elif args.algo == "sketch":
            payload = lstsq_sketch_solve(A, b, cfg)
        else:
            res = lstsq_precond(A, b, cfg, tol=args.tol, maxit=args.maxit)
            print(f"iterations={res.iterations} "
                  f"cond_estimate={res.cond_estimate:.3f}")
            payload = res.x
    elif cmd == "leverage":
        m, r = _parse_mr(args, d)
        cfg = SketchConfig(m=m, r=r, k=args.k, rcond=args.rcond, seed=seed,
                           r2=args.r2)
        if args.algo == "exact":
            payload = leverage_exact(A, rcond=args.rcond, workers=workers).theta
        elif args.algo == "css-exact":
            payload = leverage_css_exact(A, cfg).theta
        elif args.algo == "sketched":
            payload = leverage_sketched(A, args.rcond, cfg).theta
        else:
            payload = leverage_css_sketched(A, args.rcond, cfg).theta
    else:  # pragma: no cover
        raise SketchlabError(f"unhandled command {cmd}")

    if payload.ndim == 1:
        mmio.write_vector(args.out, payload)
    else:
        _write_matrix(args.out, payload)
    _maybe_report(args, cmd, n, d, m, r, workers, t0, c)
    return 0


def _maybe_report(args, cmd, n, d, m, r, workers, t0, c):
    if getattr(args, "report", None):
        wall = (time.perf_counter() - t0) * 1e3
        _report_row(args.report, cmd, n, d, m, r, workers, wall, c)


if __name__ == "__main__":
    sys.exit(main())
