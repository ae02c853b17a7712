/** File formats shared with the compute core.
 *
 * Dense: 16-byte header (rows, cols as little-endian int64) + row-major
 * float64 payload; round trips are bitwise. Sparse: Matrix Market coordinate
 * (real, general), 1-based indices; JavaScript's shortest-round-trip number
 * formatting keeps text round trips bitwise too.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { CsrMatrix, DenseMatrix } from "./types.js";

export function writeDense(path: string, m: DenseMatrix): number {
  const buf = Buffer.alloc(16 + m.rows * m.cols * 8);
  buf.writeBigInt64LE(BigInt(m.rows), 0);
  buf.writeBigInt64LE(BigInt(m.cols), 8);
  let off = 16;
  if (m.order === "C") {
    for (let i = 0; i < m.data.length; i++, off += 8) buf.writeDoubleLE(m.data[i], off);
  } else {
    for (let i = 0; i < m.rows; i++) {
      for (let j = 0; j < m.cols; j++, off += 8) {
        buf.writeDoubleLE(m.data[j * m.rows + i], off);
      }
    }
  }
  writeFileSync(path, buf);
  return buf.length;
}

export function readDense(path: string): DenseMatrix {
  const buf = readFileSync(path);
  if (buf.length < 16) throw new Error(`${path}: shorter than the 16-byte header`);
  const rows = Number(buf.readBigInt64LE(0));
  const cols = Number(buf.readBigInt64LE(8));
  if (buf.length !== 16 + rows * cols * 8) {
    throw new Error(`${path}: payload does not match ${rows} x ${cols}`);
  }
  const data = new Float64Array(rows * cols);
  for (let i = 0; i < data.length; i++) data[i] = buf.readDoubleLE(16 + i * 8);
  return { rows, cols, order: "C", data };
}

export function writeVector(path: string, x: Float64Array): number {
  return writeDense(path, { rows: x.length, cols: 1, order: "C", data: x });
}

export function readVector(path: string): Float64Array {
  const m = readDense(path);
  if (m.cols !== 1) throw new Error(`${path}: expected a column vector`);
  return m.data;
}

export function writeMatrixMarket(path: string, a: CsrMatrix): number {
  const lines: string[] = [
    "%%MatrixMarket matrix coordinate real general",
    `${a.nrows} ${a.ncols} ${a.values.length}`,
  ];
  for (let i = 0; i < a.nrows; i++) {
    for (let t = a.rowptr[i]; t < a.rowptr[i + 1]; t++) {
      lines.push(`${i + 1} ${a.colidx[t] + 1} ${a.values[t]}`);
    }
  }
  const text = lines.join("\n") + "\n";
  writeFileSync(path, text, "ascii");
  return text.length;
}

/** Pivot-order file of the column-selection command: selected count + order. */
export function readPivots(path: string): { selected: Int32Array; permutation: Int32Array } {
  const lines = readFileSync(path, "ascii").trim().split("\n");
  const header = lines[0];
  const m = /^# selected (\d+) of (\d+)/.exec(header);
  if (!m) throw new Error(`${path}: missing pivot header`);
  const k = Number(m[1]);
  const perm = Int32Array.from(lines.slice(1).map((s) => Number(s)));
  return { selected: perm.slice(0, k), permutation: perm };
}
