export {
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
} from "./bindings.js";
export type { BindingOptions } from "./bindings.js";
export {
  readDense,
  readPivots,
  readVector,
  writeDense,
  writeMatrixMarket,
  writeVector,
} from "./format.js";
export { cliCommand, runCli, withScratch } from "./runner.js";
export {
  csrFromDense,
  denseFromArray,
  LayoutError,
  toColumnMajor,
} from "./types.js";
export type { CsrMatrix, DenseMatrix, Order, TransportInfo } from "./types.js";
