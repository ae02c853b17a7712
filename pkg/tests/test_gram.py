import numpy as np
import pytest

from conftest import random_csr, rel_err
from sketchlab.errors import DimensionError, InputError
from sketchlab.gram import (gram, gram_dense, gram_parallel_lowmem,
                            gram_parallel_rowpart, gram_serial)
from sketchlab.instrument import Counters
from sketchlab.matrix import CsrMatrix, csr_from_triplets, nnz2


def test_serial_identity():
    A = CsrMatrix.from_dense(np.eye(3))
    assert np.array_equal(gram_serial(A), np.eye(3))


def test_serial_small_example():
    # rows (1,0), (0,2), (3,0): A^T A = [[10, 0], [0, 4]]
    A = CsrMatrix.from_dense(np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 0.0]]))
    assert np.array_equal(gram_serial(A), np.array([[10.0, 0.0], [0.0, 4.0]]))


def test_beta_scaling_branch(gen):
    A = random_csr(gen, 10, 3, 0.5)
    B0 = gen.standard_normal((3, 3))
    out = B0.copy()
    gram_serial(A, alpha=0.0, beta=2.0, out=out)
    assert np.array_equal(out, 2.0 * B0)
    out = B0.copy()
    gram_serial(A, alpha=0.0, beta=0.0, out=out)
    assert np.count_nonzero(out) == 0


def test_serial_matches_dense_oracle(gen):
    for _ in range(5):
        A = random_csr(gen, 100, 8, 0.2)
        want = A.to_dense().T @ A.to_dense()
        assert rel_err(gram_serial(A), want) <= 1e-12


def test_lowmem_p1_bitwise_serial(gen):
    A = random_csr(gen, 60, 7, 0.3)
    assert np.array_equal(gram_parallel_lowmem(A, workers=1), gram_serial(A))


def test_lowmem_matches_oracle(gen):
    A = random_csr(gen, 400, 12, 0.05)
    want = A.to_dense().T @ A.to_dense()
    got = gram_parallel_lowmem(A, workers=4)
    assert rel_err(got, want) <= 1e-12


def test_lowmem_zero_matrix(gen):
    A = csr_from_triplets(10, 4, [])
    B0 = gen.standard_normal((4, 4))
    out = B0.copy()
    gram_parallel_lowmem(A, alpha=1.0, beta=3.0, out=out, workers=2)
    assert np.array_equal(out, 3.0 * B0)


def test_lowmem_bitwise_across_worker_counts(gen):
    A = random_csr(gen, 150, 9, 0.2)
    ref = gram_parallel_lowmem(A, workers=1)
    for p in (2, 3, 8, 16):
        assert np.array_equal(gram_parallel_lowmem(A, workers=p), ref)


def test_rowpart_p1_bitwise_serial(gen):
    A = random_csr(gen, 80, 6, 0.25)
    B0 = gen.standard_normal((6, 6))
    o1, o2 = B0.copy(), B0.copy()
    gram_parallel_rowpart(A, alpha=0.5, beta=1.5, out=o1, workers=1)
    gram_serial(A, alpha=0.5, beta=1.5, out=o2)
    assert np.array_equal(o1, o2)


def test_rowpart_cross_p_agreement(gen):
    A = random_csr(gen, 1000, 16, 0.1)
    want = A.to_dense().T @ A.to_dense()
    results = [gram_parallel_rowpart(A, workers=p) for p in (2, 4, 8)]
    for got in results:
        assert rel_err(got, want) <= 1e-12
    for other in results[1:]:
        assert rel_err(results[0], other) <= 1e-12


def test_rowpart_more_workers_than_rows(gen):
    A = random_csr(gen, 3, 5, 0.8)
    got = gram_parallel_rowpart(A, workers=8)
    assert rel_err(got, A.to_dense().T @ A.to_dense()) <= 1e-12


def test_symmetry_and_psd(gen):
    A = random_csr(gen, 200, 10, 0.15)
    B = gram_parallel_lowmem(A, workers=4)
    scale = np.abs(B).max()
    assert np.abs(B - B.T).max() <= 1e-14 * scale
    eig = np.linalg.eigvalsh(B)
    assert eig.min() >= -1e-10 * np.linalg.norm(B)


def test_mac_counters_equal_nnz2(gen):
    A = random_csr(gen, 120, 9, 0.3)
    for fn, kw in ((gram_serial, {}), (gram_parallel_lowmem, {"workers": 3}),
                   (gram_parallel_rowpart, {"workers": 3})):
        c = Counters()
        fn(A, counters=c, **kw)
        assert c.macs == nnz2(A), fn.__name__
        assert c.flops == 2 * nnz2(A) + A.nnz + A.ncols ** 2


def test_three_algorithms_agree(gen):
    for _ in range(3):
        A = random_csr(gen, 150, 11, 0.2)
        r1 = gram_serial(A)
        r2 = gram_parallel_lowmem(A, workers=5)
        r3 = gram_parallel_rowpart(A, workers=5)
        assert rel_err(r2, r1) <= 1e-12
        assert rel_err(r3, r1) <= 1e-12


def test_gram_dispatch_and_errors(gen):
    A = random_csr(gen, 30, 4, 0.5)
    assert np.array_equal(gram(A, algo="serial"), gram_serial(A))
    with pytest.raises(InputError):
        gram(A, algo="nope")
    with pytest.raises(DimensionError):
        gram_serial(A, out=np.zeros((3, 3)))
    with pytest.raises(InputError):
        gram_serial(np.eye(3))


def test_gram_dense_delegate(gen):
    a = gen.standard_normal((40, 6))
    B0 = gen.standard_normal((6, 6))
    out = B0.copy()
    gram_dense(a, alpha=2.0, beta=0.5, out=out)
    assert rel_err(out, 2.0 * a.T @ a + 0.5 * B0) <= 1e-14
