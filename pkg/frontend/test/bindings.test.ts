/** Binding parity: every endpoint must return results bitwise-identical to
 * driving the CLI directly with the same seed, on 20 random instances each;
 * the in-place endpoints must mutate the caller's buffers without
 * reallocating them.
 */

import assert from "node:assert/strict";
import { join } from "node:path";
import { test } from "node:test";

// The numpy backend skips the JIT warm-up; parity holds per backend.
process.env.SKETCHLAB_BACKEND ??= "numpy";

import {
  csrcgs,
  csrjlt,
  csrrk,
  csrsqn,
  ls_hrn_approx,
  ls_hrn_exact,
  ls_via_inv_gram,
  ls_via_sketched_svd,
  rmcgs,
  rmsqn,
  sample_columns,
} from "../src/bindings.js";
import { readDense, readPivots, readVector, writeDense, writeMatrixMarket, writeVector } from "../src/format.js";
import { runCli, withScratch } from "../src/runner.js";
import { CsrMatrix, csrFromDense, DenseMatrix, LayoutError } from "../src/types.js";

const INSTANCES = 20;

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function randomDense(rng: () => number, rows: number, cols: number, density = 1): DenseMatrix {
  const data = new Float64Array(rows * cols);
  for (let i = 0; i < data.length; i++) {
    data[i] = rng() < density ? rng() * 2 - 1 : 0;
  }
  return { rows, cols, order: "C", data };
}

function randomInstance(rng: () => number): { a: CsrMatrix; dense: DenseMatrix } {
  const n = 30 + Math.floor(rng() * 60);
  const d = 3 + Math.floor(rng() * 5);
  const dense = randomDense(rng, n, d, 0.4);
  return { a: csrFromDense(dense), dense };
}

function bitwiseEqual(a: Float64Array, b: Float64Array): boolean {
  if (a.length !== b.length) return false;
  const ua = new BigUint64Array(a.buffer, a.byteOffset, a.length);
  const ub = new BigUint64Array(b.buffer, b.byteOffset, b.length);
  for (let i = 0; i < ua.length; i++) if (ua[i] !== ub[i]) return false;
  return true;
}

/** Drive the CLI directly: write A, run argv with --in/--out, read back. */
function direct(a: CsrMatrix | DenseMatrix, argv: string[],
                read: "dense" | "vector" | "pivots" = "dense"):
    DenseMatrix | Float64Array | Int32Array {
  return withScratch((dir) => {
    const src = "rowptr" in a ? join(dir, "a.mtx") : join(dir, "a.bin");
    if ("rowptr" in a) writeMatrixMarket(src, a);
    else writeDense(src, a);
    const out = join(dir, read === "pivots" ? "out.txt" : "out.bin");
    runCli([argv[0], "--in", src, ...argv.slice(1), "--out", out]);
    if (read === "dense") return readDense(out);
    if (read === "vector") return readVector(out);
    return readPivots(out).selected;
  });
}

test("csrcgs matches the CLI bitwise (incl. m = 0)", () => {
  const rng = mulberry32(101);
  for (let i = 0; i < INSTANCES; i++) {
    const { a } = randomInstance(rng);
    const m = i % 3 === 0 ? 0 : 6;
    const got = csrcgs(a, m, 16, { seed: i });
    const want = direct(a, ["sketch-cg", "--m", String(m), "--r", "16",
                            "--seed", String(i)]) as DenseMatrix;
    assert.equal(got.rows, m === 0 ? 16 : m);
    assert.ok(bitwiseEqual(got.data, want.data), `instance ${i}`);
  }
});

test("rmcgs matches the CLI bitwise on dense input", () => {
  const rng = mulberry32(102);
  for (let i = 0; i < INSTANCES; i++) {
    const { dense } = randomInstance(rng);
    const got = rmcgs(dense, 5, 12, { seed: i });
    const want = direct(dense, ["sketch-cg", "--m", "5", "--r", "12",
                                "--seed", String(i)]) as DenseMatrix;
    assert.ok(bitwiseEqual(got.data, want.data), `instance ${i}`);
  }
});

test("csrjlt matches the CLI bitwise and is column-major", () => {
  const rng = mulberry32(103);
  for (let i = 0; i < INSTANCES; i++) {
    const { a } = randomInstance(rng);
    const m = 7;
    const got = csrjlt(a, m, { seed: i });
    assert.equal(got.order, "F");
    const want = direct(a, ["sketch-gauss", "--m", String(m),
                            "--seed", String(i)]) as DenseMatrix;
    for (let r = 0; r < got.rows; r++) {
      for (let c = 0; c < got.cols; c++) {
        assert.ok(Object.is(got.data[c * got.rows + r], want.data[r * got.cols + c]),
                  `instance ${i} entry (${r}, ${c})`);
      }
    }
  }
});

test("csrrk matches the CLI bitwise and updates C in place", () => {
  const rng = mulberry32(104);
  for (let i = 0; i < INSTANCES; i++) {
    const { a } = randomInstance(rng);
    const d = a.ncols;
    const c0 = randomDense(rng, d, d);
    const c = { ...c0, data: c0.data.slice() };
    const buffer = c.data;
    const alpha = 0.5 + rng();
    const beta = i % 4 === 0 ? 0 : rng() - 0.5;
    const info = csrrk(alpha, a, beta, c, { seed: i });
    assert.equal(c.data, buffer, "accumulator must not be reallocated");
    assert.equal(info.zeroCopy, false);
    assert.equal(info.mode, "file-copy");
    const want = withScratch((dir) => {
      const src = join(dir, "a.mtx");
      writeMatrixMarket(src, a);
      const accum = join(dir, "c0.bin");
      writeDense(accum, c0);
      const out = join(dir, "out.bin");
      const argv = ["gram", "--in", src, "--alpha", String(alpha),
                    "--beta", String(beta), "--seed", String(i), "--out", out];
      if (beta !== 0) argv.push("--accum", accum);
      runCli(argv);
      return readDense(out);
    });
    assert.ok(bitwiseEqual(c.data, want.data), `instance ${i}`);
  }
});

test("csrrk identity example", () => {
  const eye: CsrMatrix = {
    nrows: 3,
    ncols: 3,
    rowptr: Int32Array.from([0, 1, 2, 3]),
    colidx: Int32Array.from([0, 1, 2]),
    values: Float64Array.from([1, 1, 1]),
  };
  const c: DenseMatrix = { rows: 3, cols: 3, order: "C", data: new Float64Array(9) };
  csrrk(1, eye, 0, c);
  assert.deepEqual(Array.from(c.data), [1, 0, 0, 0, 1, 0, 0, 0, 1]);
});

test("csrsqn matches the CLI bitwise and updates x in place", () => {
  const rng = mulberry32(105);
  for (let i = 0; i < INSTANCES; i++) {
    const { a } = randomInstance(rng);
    const b = randomDense(rng, a.ncols, 3);
    const x = Float64Array.from({ length: a.nrows }, () => rng());
    const x0 = x.slice();
    const beta = i % 4 === 0 ? 0 : 2;
    const info = csrsqn(1.5, a, b, beta, x, { seed: i });
    assert.equal(info.mode, "file-copy");
    const want = withScratch((dir) => {
      const src = join(dir, "a.mtx");
      writeMatrixMarket(src, a);
      const bp = join(dir, "b.bin");
      writeDense(bp, b);
      const out = join(dir, "x.bin");
      const argv = ["rownorms", "--in", src, "--b", bp, "--alpha", "1.5",
                    "--beta", String(beta), "--seed", String(i), "--out", out];
      if (beta !== 0) {
        const accum = join(dir, "x0.bin");
        writeVector(accum, x0);
        argv.push("--accum", accum);
      }
      runCli(argv);
      return readVector(out);
    });
    assert.ok(bitwiseEqual(x, want), `instance ${i}`);
  }
});

test("csrsqn row-norm example (B = I)", () => {
  const dense = randomDense(mulberry32(9), 12, 4, 0.6);
  const a = csrFromDense(dense);
  const eye: DenseMatrix = { rows: 4, cols: 4, order: "C", data: new Float64Array(16) };
  for (let j = 0; j < 4; j++) eye.data[j * 4 + j] = 1;
  const x = new Float64Array(12);
  csrsqn(1, a, eye, 0, x);
  for (let i = 0; i < 12; i++) {
    let want = 0;
    for (let j = 0; j < 4; j++) want += dense.data[i * 4 + j] ** 2;
    assert.ok(Math.abs(x[i] - want) <= 1e-12 * Math.max(1, want), `row ${i}`);
  }
});

test("rmsqn matches the CLI bitwise on dense input", () => {
  const rng = mulberry32(106);
  for (let i = 0; i < INSTANCES; i++) {
    const { dense } = randomInstance(rng);
    const b = randomDense(rng, dense.cols, 2);
    const x = new Float64Array(dense.rows);
    rmsqn(1, dense, b, 0, x, { seed: i });
    const want = withScratch((dir) => {
      const src = join(dir, "a.bin");
      writeDense(src, dense);
      const bp = join(dir, "b.bin");
      writeDense(bp, b);
      const out = join(dir, "x.bin");
      runCli(["rownorms", "--in", src, "--b", bp, "--seed", String(i), "--out", out]);
      return readVector(out);
    });
    assert.ok(bitwiseEqual(x, want), `instance ${i}`);
  }
});

test("sample_columns matches the CLI selection (sparse and dense inputs)", () => {
  const rng = mulberry32(107);
  for (let i = 0; i < INSTANCES; i++) {
    const { a, dense } = randomInstance(rng);
    const input = i % 2 === 0 ? a : dense;
    const got = sample_columns(input, 1e-10, 6, 16, { seed: i });
    const want = direct(input, ["css", "--rcond", "1e-10", "--m", "6", "--r", "16",
                                "--seed", String(i)], "pivots") as Int32Array;
    assert.deepEqual(Array.from(got), Array.from(want), `instance ${i}`);
  }
});

test("leverage-score bindings match the CLI bitwise", () => {
  const rng = mulberry32(108);
  const cases: Array<[string, (a: CsrMatrix, seed: number) => Float64Array, string[]]> = [
    ["ls_via_inv_gram",
     (a, s) => ls_via_inv_gram(a, 1e-10, { seed: s }),
     ["leverage", "--algo", "exact", "--rcond", "1e-10"]],
    ["ls_via_sketched_svd",
     (a, s) => ls_via_sketched_svd(a, 1e-10, 0, 24, 16, { seed: s }),
     ["leverage", "--algo", "sketched", "--rcond", "1e-10", "--m", "0",
      "--r", "24", "--r2", "16"]],
    ["ls_hrn_exact",
     (a, s) => ls_hrn_exact(a, 1e-10, 6, 16, { seed: s }),
     ["leverage", "--algo", "css-exact", "--rcond", "1e-10", "--m", "6", "--r", "16"]],
    ["ls_hrn_approx",
     (a, s) => ls_hrn_approx(a, 1e-10, 6, 16, 16, { seed: s }),
     ["leverage", "--algo", "css-sketched", "--rcond", "1e-10", "--m", "6",
      "--r", "16", "--r2", "16"]],
  ];
  // 20 instances spread over the four endpoints, each endpoint sees every
  // instance shape class.
  for (let i = 0; i < INSTANCES; i++) {
    const { a } = randomInstance(rng);
    const [name, call, argv] = cases[i % cases.length];
    const got = call(a, i);
    const want = direct(a, [...argv, "--seed", String(i)], "vector") as Float64Array;
    assert.ok(bitwiseEqual(got, want), `${name} instance ${i}`);
  }
});

test("wrong layout raises a typed error naming the expectation", () => {
  const f: DenseMatrix = { rows: 2, cols: 2, order: "F", data: new Float64Array(4) };
  assert.throws(() => rmcgs(f, 2, 4), LayoutError);
  assert.throws(() => rmcgs(f, 2, 4), /row-major/);
  const x = new Float64Array(2);
  assert.throws(() => rmsqn(1, f, f, 0, x), LayoutError);
});
