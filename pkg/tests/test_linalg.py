import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qgvertex.errors import DimensionMismatch, SingularMatrix
from qgvertex.linalg import as_cmatrix, dagger, frobenius, inverse, is_hermitian, is_unitary, rank_tol


def _matrix(seed, n, cols=None):
    rng = np.random.default_rng(seed)
    cols = n if cols is None else cols
    return rng.normal(size=(n, cols)) + 1j * rng.normal(size=(n, cols))


@pytest.mark.parametrize(
    "m, expected",
    [(np.eye(3), 3), (np.zeros((2, 2)), 0), (np.ones((2, 2)), 1), (np.zeros((0, 0)), 0)],
)
def test_rank_small_cases(m, expected):
    assert rank_tol(m, 1e-10) == expected


def test_rank_rejects_negative_tol():
    with pytest.raises(ValueError):
        rank_tol(np.eye(2), -1.0)


def test_rank_of_low_rank_product():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(5, 2)) @ rng.normal(size=(2, 6))
    assert rank_tol(a) == 2


def test_inverse_identity_and_diagonal():
    assert np.allclose(inverse(np.eye(2)), np.eye(2))
    assert np.allclose(inverse(np.diag([2, 4j])), np.diag([0.5, -0.25j]))


def test_inverse_residual_random():
    m = _matrix(7, 4) + 4 * np.eye(4)
    assert frobenius(m @ inverse(m) - np.eye(4)) < 1e-10


def test_inverse_singular_raises():
    with pytest.raises(SingularMatrix):
        inverse(np.ones((3, 3)))


def test_inverse_shape_check():
    with pytest.raises(DimensionMismatch):
        inverse(np.ones((2, 3)))


def test_hermitian_examples():
    assert is_hermitian(np.array([[1, 1j], [-1j, 2]]))
    assert not is_hermitian(np.array([[0, 1], [0, 0]]))
    assert is_hermitian(np.zeros((3, 3)))


def test_as_cmatrix_rejects_nonfinite_and_bad_shape():
    with pytest.raises(ValueError):
        as_cmatrix([[np.nan]])
    with pytest.raises(DimensionMismatch):
        as_cmatrix(np.ones((2, 2)), rows=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6), st.integers(1, 6), st.integers(1, 6))
def test_rank_invariant_under_permutations(seed, rows, cols, r):
    rng = np.random.default_rng(seed)
    r = min(r, rows, cols)
    a = (rng.normal(size=(rows, r)) + 1j * rng.normal(size=(rows, r))) @ rng.normal(size=(r, cols))
    pa = a[rng.permutation(rows)][:, rng.permutation(cols)]
    assert rank_tol(a) == rank_tol(pa) == r


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_double_inverse(seed, n):
    m = _matrix(seed, n)
    if np.linalg.cond(m) > 1e6:
        m = m + 3 * np.eye(n)
    assert np.allclose(inverse(inverse(m)), m, atol=1e-8 * max(1.0, np.abs(m).max()))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_symmetrized_matrix_is_hermitian(seed, n):
    m = _matrix(seed, n)
    assert is_hermitian(m + dagger(m))


def test_is_unitary():
    q, _ = np.linalg.qr(_matrix(1, 4))
    assert is_unitary(q)
    assert not is_unitary(2 * q)
    assert not is_unitary(np.ones((2, 3)))
