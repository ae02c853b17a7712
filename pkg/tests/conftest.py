import numpy as np
import pytest

from sketchlab.matrix import CsrMatrix


def random_csr(gen, n, d, density=0.1):
    """Random sparse matrix via a dense mask (test instances only)."""
    a = gen.standard_normal((n, d))
    if density < 1.0:
        a[gen.random((n, d)) >= density] = 0.0
    return CsrMatrix.from_dense(a)


def dense_of(A):
    return A.to_dense() if isinstance(A, CsrMatrix) else np.asarray(A, dtype=float)


def rel_err(got, want):
    denom = np.linalg.norm(want)
    if denom == 0.0:
        return np.linalg.norm(got)
    return np.linalg.norm(got - want) / denom


@pytest.fixture
def gen():
    return np.random.default_rng(1234)
