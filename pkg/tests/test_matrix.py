import numpy as np
import pytest

from conftest import random_csr
from sketchlab.errors import DimensionError, InputError
from sketchlab.matrix import (COL_MAJOR, CsrMatrix, DenseMatrix, ROW_MAJOR,
                              SketchConfig, csr_from_triplets, nnz2)


def test_triplets_identity_pattern():
    A = csr_from_triplets(2, 2, [(0, 0, 1.0), (1, 1, 1.0)])
    assert list(A.rowptr) == [0, 1, 2]
    assert list(A.colidx) == [0, 1]
    assert A.nnz == 2


def test_triplets_duplicates_sum():
    A = csr_from_triplets(2, 2, [(0, 0, 1.0), (0, 0, 2.0)])
    assert A.nnz == 1
    assert A.values[0] == 3.0


def test_triplets_match_dense_accumulation_oracle(gen):
    for _ in range(20):
        trips = [(int(gen.integers(3)), int(gen.integers(2)), float(gen.standard_normal()))
                 for _ in range(5)]
        dense = np.zeros((3, 2))
        for i, j, v in trips:
            dense[i, j] += v
        A = csr_from_triplets(3, 2, trips)
        assert np.array_equal(A.to_dense(), dense)
        A.validate()


def test_triplets_out_of_range():
    with pytest.raises(InputError):
        csr_from_triplets(2, 2, [(2, 0, 1.0)])
    with pytest.raises(InputError):
        csr_from_triplets(2, 2, [(0, -1, 1.0)])


def test_triplets_cancellation_drops_entry():
    A = csr_from_triplets(2, 2, [(0, 1, 1.0), (0, 1, -1.0)])
    assert A.nnz == 0


def test_nnz2_examples(gen):
    assert nnz2(csr_from_triplets(2, 2, [(0, 0, 1.0), (1, 1, 1.0)])) == 2
    # rows with nnz {2, 3} -> 4 + 9
    A = csr_from_triplets(2, 3, [(0, 0, 1.0), (0, 2, 1.0),
                                 (1, 0, 1.0), (1, 1, 1.0), (1, 2, 1.0)])
    assert nnz2(A) == 13
    B = random_csr(gen, 50, 10, 0.2)
    assert nnz2(B) == sum(int(c) ** 2 for c in B.row_nnz())
    assert nnz2(B) >= B.nnz


def test_nnz2_equality_iff_rows_have_at_most_one():
    A = csr_from_triplets(3, 3, [(0, 1, 1.0), (2, 0, 2.0)])
    assert nnz2(A) == A.nnz


def test_dense_round_trip(gen):
    a = gen.standard_normal((7, 4))
    a[gen.random((7, 4)) > 0.5] = 0.0
    A = CsrMatrix.from_dense(a)
    assert np.array_equal(A.to_dense(), a)
    A.validate()


def test_validator_rejects_broken_structures():
    good = csr_from_triplets(2, 2, [(0, 0, 1.0), (1, 1, 2.0)])
    with pytest.raises(InputError):
        CsrMatrix(2, 2, [0, 1], good.colidx, good.values)  # short rowptr
    with pytest.raises(InputError):
        CsrMatrix(2, 2, [0, 2, 1], good.colidx, good.values)  # decreasing
    with pytest.raises(InputError):
        CsrMatrix(2, 2, good.rowptr, [0, 5], good.values)  # col out of range
    with pytest.raises(InputError):
        CsrMatrix(2, 2, [0, 2, 2], [1, 0], [1.0, 2.0])  # unsorted within row
    with pytest.raises(InputError):
        CsrMatrix(2, 2, good.rowptr, good.colidx, [1.0, 0.0])  # explicit zero


def test_select_columns(gen):
    A = random_csr(gen, 30, 8, 0.4)
    cols = [5, 1, 6]
    B = A.select_columns(cols)
    assert np.array_equal(B.to_dense(), A.to_dense()[:, cols])
    B.validate()
    with pytest.raises(InputError):
        A.select_columns([0, 0])
    with pytest.raises(InputError):
        A.select_columns([9])


def test_append_column(gen):
    A = random_csr(gen, 25, 6, 0.3)
    v = gen.standard_normal(25)
    v[gen.random(25) > 0.6] = 0.0
    B = A.append_column(v)
    assert np.array_equal(B.to_dense(), np.column_stack([A.to_dense(), v]))
    B.validate()
    with pytest.raises(DimensionError):
        A.append_column(np.ones(3))


def test_dense_matrix_layouts(gen):
    a = gen.standard_normal((5, 3))
    M = DenseMatrix.from_array(a)
    assert M.layout == ROW_MAJOR
    assert np.array_equal(M.array, a)
    F = DenseMatrix.from_array(np.asfortranarray(a))
    assert F.layout == COL_MAJOR
    assert np.array_equal(F.array, a)
    assert F.item(2, 1) == a[2, 1] == M.item(2, 1)
    R = F.to_layout(ROW_MAJOR)
    assert R.layout == ROW_MAJOR and np.array_equal(R.array, a)


def test_sketch_config_validation():
    cfg = SketchConfig(m=4, r=16, batch=8)
    assert cfg.batch_size(5) == 8
    assert SketchConfig(r=16).batch_size(5) == 5
    assert SketchConfig(r=3).batch_size(5) == 3
    for bad in (dict(m=-1), dict(r=0), dict(rcond=1.0), dict(rcond=-0.1),
                dict(r=4, batch=5), dict(k=-2)):
        with pytest.raises(InputError):
            SketchConfig(**bad)
