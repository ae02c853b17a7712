/** Matrix containers exchanged with the compute core. */

export interface CsrMatrix {
  nrows: number;
  ncols: number;
  /** Row pointers, length nrows + 1. */
  rowptr: Int32Array;
  /** Column indices sorted strictly increasing within each row. */
  colidx: Int32Array;
  /** Nonzero values (no explicit zeros). */
  values: Float64Array;
}

export type Order = "C" | "F";

export interface DenseMatrix {
  rows: number;
  cols: number;
  /** Storage order of `data`: "C" row-major, "F" column-major. */
  order: Order;
  data: Float64Array;
}

/** Thrown when an argument has the wrong storage layout for a binding. */
export class LayoutError extends TypeError {
  constructor(expected: string, got: string) {
    super(`expected ${expected} storage, got ${got}`);
    this.name = "LayoutError";
  }
}

/**
 * How results travel between this package and the compute core. Bindings go
 * through the core's file formats, so a zero-copy view is never taken; each
 * in-place call reports the bytes it moved.
 */
export interface TransportInfo {
  zeroCopy: false;
  mode: "file-copy";
  bytesIn: number;
  bytesOut: number;
}

export function denseFromArray(rows: number, cols: number, values: number[][]): DenseMatrix {
  const data = new Float64Array(rows * cols);
  for (let i = 0; i < rows; i++) {
    for (let j = 0; j < cols; j++) data[i * cols + j] = values[i][j];
  }
  return { rows, cols, order: "C", data };
}

/** Build canonical CSR from a dense row-major array, dropping zeros. */
export function csrFromDense(a: DenseMatrix): CsrMatrix {
  if (a.order !== "C") throw new LayoutError("row-major (C)", a.order);
  const rowptr = new Int32Array(a.rows + 1);
  const cols: number[] = [];
  const vals: number[] = [];
  for (let i = 0; i < a.rows; i++) {
    for (let j = 0; j < a.cols; j++) {
      const v = a.data[i * a.cols + j];
      if (v !== 0) {
        cols.push(j);
        vals.push(v);
      }
    }
    rowptr[i + 1] = cols.length;
  }
  return {
    nrows: a.rows,
    ncols: a.cols,
    rowptr,
    colidx: Int32Array.from(cols),
    values: Float64Array.from(vals),
  };
}

/** Repack a row-major payload as column-major (values preserved bitwise). */
export function toColumnMajor(m: DenseMatrix): DenseMatrix {
  if (m.order === "F") return m;
  const data = new Float64Array(m.data.length);
  for (let j = 0; j < m.cols; j++) {
    for (let i = 0; i < m.rows; i++) data[j * m.rows + i] = m.data[i * m.cols + j];
  }
  return { rows: m.rows, cols: m.cols, order: "F", data };
}
