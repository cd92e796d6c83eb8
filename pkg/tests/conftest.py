import numpy as np
import pytest

from setvec import SparseVector, Vocabulary


@pytest.fixture
def vocab():
    return Vocabulary()


@pytest.fixture
def birds(vocab):
    """The two-country query pair used as a worked example throughout.

    A = (birds, fly, colombia, andes), B = (birds, fly, venezuela, andes),
    all weights 1.  A.B = 3, |A| = |B| = 2.
    """
    a = SparseVector.from_pairs(
        [("birds", 1.0), ("fly", 1.0), ("colombia", 1.0), ("andes", 1.0)], vocab
    )
    b = SparseVector.from_pairs(
        [("birds", 1.0), ("fly", 1.0), ("venezuela", 1.0), ("andes", 1.0)], vocab
    )
    return a, b


def random_vector(rng, vocab, max_nnz=50, low=-2.0, high=2.0, min_nnz=0):
    """Random canonical vector over *vocab* with uniform weights."""
    nnz = min(int(rng.integers(min_nnz, max_nnz + 1)), len(vocab))
    ids = rng.choice(len(vocab), size=nnz, replace=False)
    weights = rng.uniform(low, high, size=nnz)
    weights[weights == 0.0] = 1.0
    return SparseVector(ids, weights, vocab)


def random_lattice_vector(rng, vocab, max_nnz=20, min_nnz=0, lo=1, hi=256):
    """Random vector with weights k/64, k integer: float arithmetic on these
    (sums/differences of pairwise products) is exact, so tests can assert
    exact score identities."""
    nnz = min(int(rng.integers(min_nnz, max_nnz + 1)), len(vocab))
    ids = rng.choice(len(vocab), size=nnz, replace=False)
    weights = rng.integers(lo, hi, size=nnz).astype(np.float64) / 64.0
    return SparseVector(ids, weights, vocab)
