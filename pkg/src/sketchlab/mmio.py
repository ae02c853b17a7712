"""Matrix Market (coordinate, real, general) and binary dense file I/O.

The binary dense format is a 16-byte header (nrows, ncols as little-endian
64-bit signed integers) followed by the row-major float64 payload; the
round trip is bitwise. Matrix Market values are written with 17 significant
digits so text round trips are bitwise as well.
"""

import struct

import numpy as np

from .errors import ParseError
from .matrix import CsrMatrix, DenseMatrix, ROW_MAJOR, csr_from_arrays

_BANNER = "%%MatrixMarket"
_HEADER = struct.Struct("<qq")


def read_matrix_market(path):
    with open(path, "r", encoding="ascii") as fh:
        first = fh.readline()
        if not first.startswith(_BANNER):
            raise ParseError("missing MatrixMarket banner", line=1)
        fields = first.strip().lower().split()
        if fields[1:5] != ["matrix", "coordinate", "real", "general"]:
            raise ParseError(f"unsupported header {first.strip()!r} "
                             "(need: matrix coordinate real general)", line=1)
        lineno = 1
        size = None
        for raw in fh:
            lineno += 1
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError("size line must be 'nrows ncols nnz'", line=lineno)
            try:
                size = tuple(int(p) for p in parts)
            except ValueError:
                raise ParseError("non-integer size entry", line=lineno) from None
            break
        if size is None:
            raise ParseError("missing size line", line=lineno)
        nrows, ncols, nnz = size
        if nrows < 0 or ncols < 0 or nnz < 0:
            raise ParseError("negative size entry", line=lineno)
        rows = np.empty(nnz, dtype=np.int64)
        cols = np.empty(nnz, dtype=np.int64)
        vals = np.empty(nnz, dtype=np.float64)
        got = 0
        for raw in fh:
            lineno += 1
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError("entry must be 'row col value'", line=lineno)
            if got >= nnz:
                raise ParseError("more entries than declared", line=lineno)
            try:
                i, j = int(parts[0]), int(parts[1])
                v = float(parts[2])
            except ValueError:
                raise ParseError(f"non-numeric entry {line!r}", line=lineno) from None
            if not (1 <= i <= nrows and 1 <= j <= ncols):
                raise ParseError(f"index ({i}, {j}) outside {nrows} x {ncols}",
                                 line=lineno)
            rows[got], cols[got], vals[got] = i - 1, j - 1, v
            got += 1
        if got != nnz:
            raise ParseError(f"declared {nnz} entries, found {got}", line=lineno)
    return csr_from_arrays(nrows, ncols, rows, cols, vals)


def write_matrix_market(path, A, comment=None):
    if not isinstance(A, CsrMatrix):
        A = CsrMatrix.from_dense(A)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        if comment:
            fh.write(f"% {comment}\n")
        fh.write(f"{A.nrows} {A.ncols} {A.nnz}\n")
        rows = np.repeat(np.arange(A.nrows), A.row_nnz())
        for i, j, v in zip(rows, A.colidx, A.values):
            fh.write(f"{i + 1} {j + 1} {v:.17g}\n")


def write_dense(path, M):
    if not isinstance(M, DenseMatrix):
        M = DenseMatrix.from_array(np.atleast_2d(np.asarray(M, dtype=np.float64)))
    a = M.array
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(M.nrows, M.ncols))
        fh.write(np.ascontiguousarray(a).astype("<f8", copy=False).tobytes())


def read_dense(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ParseError("dense file shorter than its 16-byte header")
        nrows, ncols = _HEADER.unpack(head)
        if nrows < 0 or ncols < 0:
            raise ParseError(f"negative dimension in header ({nrows}, {ncols})")
        payload = fh.read()
    expect = nrows * ncols * 8
    if len(payload) != expect:
        raise ParseError(f"payload holds {len(payload)} bytes, header implies {expect}")
    data = np.frombuffer(payload, dtype="<f8").astype(np.float64, copy=True)
    return DenseMatrix(nrows, ncols, ROW_MAJOR, data)


def write_vector(path, x):
    write_dense(path, DenseMatrix(len(x), 1, ROW_MAJOR,
                                  np.ascontiguousarray(x, dtype=np.float64)))


def read_vector(path):
    M = read_dense(path)
    if M.ncols != 1:
        raise ParseError(f"expected a column vector, got {M.nrows} x {M.ncols}")
    return M.data.copy()


def read_any(path):
    """CsrMatrix for .mtx, DenseMatrix for .bin."""
    p = str(path)
    if p.endswith(".mtx"):
        return read_matrix_market(p)
    if p.endswith(".bin"):
        return read_dense(p)
    raise ParseError(f"unknown matrix file suffix: {p} (expected .mtx or .bin)")
