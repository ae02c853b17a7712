/** Scripting bindings over the compute core.
 *
 * Each function writes its operands in the core's file formats, drives one
 * CLI subcommand, and reads the result back; a fixed seed therefore gives
 * results bitwise-identical to invoking the CLI directly. csrrk, csrsqn and
 * rmsqn update their output operand in place (the caller's buffer is written,
 * never reallocated) and return a TransportInfo describing the bytes moved.
 */

import { join } from "node:path";

import {
  readDense,
  readPivots,
  readVector,
  writeDense,
  writeMatrixMarket,
  writeVector,
} from "./format.js";
import { runCli, withScratch } from "./runner.js";
import {
  CsrMatrix,
  DenseMatrix,
  LayoutError,
  toColumnMajor,
  TransportInfo,
} from "./types.js";

export interface BindingOptions {
  seed?: number;
  threads?: number;
}

function requireRowMajor(m: DenseMatrix, what: string): void {
  if (m.order !== "C") throw new LayoutError(`row-major (C) ${what}`, m.order);
}

function common(opts: BindingOptions | undefined): string[] {
  const args = ["--seed", String(opts?.seed ?? 0)];
  if (opts?.threads) args.push("--threads", String(opts.threads));
  return args;
}

/** Write A (sparse or dense) into dir and return the path handed to --in. */
function writeInput(dir: string, a: CsrMatrix | DenseMatrix): { path: string; bytes: number } {
  if ("rowptr" in a) {
    const path = join(dir, "a.mtx");
    return { path, bytes: writeMatrixMarket(path, a) };
  }
  requireRowMajor(a, "input matrix");
  const path = join(dir, "a.bin");
  return { path, bytes: writeDense(path, a) };
}

function transport(bytesIn: number, bytesOut: number): TransportInfo {
  return { zeroCopy: false, mode: "file-copy", bytesIn, bytesOut };
}

function countgauss(a: CsrMatrix | DenseMatrix, m: number, r: number,
                    opts?: BindingOptions): DenseMatrix {
  return withScratch((dir) => {
    const inp = writeInput(dir, a);
    const out = join(dir, "c.bin");
    runCli(["sketch-cg", "--in", inp.path, "--m", String(m), "--r", String(r),
            ...common(opts), "--out", out]);
    return readDense(out);
  });
}

/** C = G S A (m x d, row-major); m = 0 computes S A only. */
export function csrcgs(a: CsrMatrix, m: number, r: number, opts?: BindingOptions): DenseMatrix {
  return countgauss(a, m, r, opts);
}

/** Dense-input variant of csrcgs; A must be row-major. */
export function rmcgs(a: DenseMatrix, m: number, r: number, opts?: BindingOptions): DenseMatrix {
  requireRowMajor(a, "input matrix");
  return countgauss(a, m, r, opts);
}

/** C = G A with G m x n Gaussian scaled by 1/sqrt(m); column-major result. */
export function csrjlt(a: CsrMatrix, m: number, opts?: BindingOptions): DenseMatrix {
  return withScratch((dir) => {
    const inp = writeInput(dir, a);
    const out = join(dir, "c.bin");
    runCli(["sketch-gauss", "--in", inp.path, "--m", String(m),
            ...common(opts), "--out", out]);
    return toColumnMajor(readDense(out));
  });
}

/** C <- alpha A^T A + beta C, C updated in place (row-major d x d). */
export function csrrk(alpha: number, a: CsrMatrix, beta: number, c: DenseMatrix,
                      opts?: BindingOptions): TransportInfo {
  requireRowMajor(c, "accumulator");
  if (c.rows !== a.ncols || c.cols !== a.ncols) {
    throw new Error(`accumulator must be ${a.ncols} x ${a.ncols}`);
  }
  return withScratch((dir) => {
    const inp = writeInput(dir, a);
    let bytesIn = inp.bytes;
    const out = join(dir, "c.bin");
    const args = ["gram", "--in", inp.path, "--alpha", String(alpha),
                  "--beta", String(beta), ...common(opts), "--out", out];
    if (beta !== 0) {
      const accum = join(dir, "accum.bin");
      bytesIn += writeDense(accum, c);
      args.push("--accum", accum);
    }
    runCli(args);
    const res = readDense(out);
    c.data.set(res.data);
    return transport(bytesIn, res.data.byteLength);
  });
}

/** x <- alpha q + beta x with q the squared row norms of A B; x in place. */
export function csrsqn(alpha: number, a: CsrMatrix | DenseMatrix, b: DenseMatrix,
                       beta: number, x: Float64Array, opts?: BindingOptions): TransportInfo {
  requireRowMajor(b, "B operand");
  return withScratch((dir) => {
    const inp = writeInput(dir, a);
    const bpath = join(dir, "b.bin");
    let bytesIn = inp.bytes + writeDense(bpath, b);
    const out = join(dir, "x.bin");
    const args = ["rownorms", "--in", inp.path, "--b", bpath,
                  "--alpha", String(alpha), "--beta", String(beta),
                  ...common(opts), "--out", out];
    if (beta !== 0) {
      const accum = join(dir, "x0.bin");
      bytesIn += writeVector(accum, x);
      args.push("--accum", accum);
    }
    runCli(args);
    const res = readVector(out);
    x.set(res);
    return transport(bytesIn, res.byteLength);
  });
}

/** Dense-input variant of csrsqn; A must be row-major. */
export function rmsqn(alpha: number, a: DenseMatrix, b: DenseMatrix, beta: number,
                      x: Float64Array, opts?: BindingOptions): TransportInfo {
  requireRowMajor(a, "input matrix");
  return csrsqn(alpha, a, b, beta, x, opts);
}

/** Rank-revealing column subset via the countgauss sketch and pivoted QR. */
export function sample_columns(a: CsrMatrix | DenseMatrix, rcond: number, m: number,
                               r: number, opts?: BindingOptions): Int32Array {
  return withScratch((dir) => {
    const inp = writeInput(dir, a);
    const out = join(dir, "pivots.txt");
    runCli(["css", "--in", inp.path, "--rcond", String(rcond), "--m", String(m),
            "--r", String(r), ...common(opts), "--out", out]);
    return readPivots(out).selected;
  });
}

function leverage(algo: string, a: CsrMatrix | DenseMatrix, args: string[],
                  opts?: BindingOptions): Float64Array {
  return withScratch((dir) => {
    const inp = writeInput(dir, a);
    const out = join(dir, "theta.bin");
    runCli(["leverage", "--in", inp.path, "--algo", algo, ...args,
            ...common(opts), "--out", out]);
    return readVector(out);
  });
}

/** Exact leverage scores of the rank-k (rcond) approximation of A. */
export function ls_via_inv_gram(a: CsrMatrix | DenseMatrix, rcond: number,
                                opts?: BindingOptions): Float64Array {
  return leverage("exact", a, ["--rcond", String(rcond)], opts);
}

/** Approximate leverage scores via the sketched SVD (r1 sketch rows, r2 projector columns). */
export function ls_via_sketched_svd(a: CsrMatrix | DenseMatrix, rcond: number, m: number,
                                    r1: number, r2: number, opts?: BindingOptions): Float64Array {
  return leverage("sketched", a,
                  ["--rcond", String(rcond), "--m", String(m), "--r", String(r1),
                   "--r2", String(r2)], opts);
}

/** Column subset first, then exact scores of the selected submatrix. */
export function ls_hrn_exact(a: CsrMatrix | DenseMatrix, rcond: number, m: number,
                             r: number, opts?: BindingOptions): Float64Array {
  return leverage("css-exact", a,
                  ["--rcond", String(rcond), "--m", String(m), "--r", String(r)], opts);
}

/** Column subset first, then sketched scores of the selected submatrix. */
export function ls_hrn_approx(a: CsrMatrix | DenseMatrix, rcond: number, m: number,
                              r: number, r2 = 0, opts?: BindingOptions): Float64Array {
  return leverage("css-sketched", a,
                  ["--rcond", String(rcond), "--m", String(m), "--r", String(r),
                   "--r2", String(r2)], opts);
}
