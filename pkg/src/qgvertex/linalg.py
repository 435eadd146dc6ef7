"""Small dense complex matrix services.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The matrices in
this package are tiny (a vertex of degree ``n`` rarely exceeds 16), so rank and
singularity are decided by a transparent Gaussian elimination with complete
pivoting instead of an SVD; the pivots it produces are what the thresholds
are compared against.
"""

import numpy as np

from .errors import DimensionMismatch, SingularMatrix

DEFAULT_TOL = 1e-10


def as_cmatrix(m, rows=None, cols=None):
    """Coerce ``m`` to a 2-D finite complex array, optionally checking its shape."""
    a = np.array(m, dtype=complex)
    if a.ndim == 1 and a.size == 0:
        a = a.reshape(0, 0 if cols is None else cols)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {a.shape}")
    if rows is not None and a.shape[0] != rows or cols is not None and a.shape[1] != cols:
        raise DimensionMismatch(f"expected shape ({rows}, {cols}), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def dagger(m):
    """Conjugate transpose."""
    return np.conj(np.asarray(m)).T


def frobenius(m):
    return float(np.linalg.norm(np.asarray(m), "fro")) if np.size(m) else 0.0


def _scale(a):
    return max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0


def elimination_pivots(m):
    """Return the pivot magnitudes of Gaussian elimination with complete pivoting.

    The list has ``min(rows, cols)`` entries in elimination order; it is
    non-increasing up to rounding, so trailing entries are the ones that
    decide rank.
    """
    a = np.array(m, dtype=complex)
    nr, nc = a.shape
    pivots = []
    for k in range(min(nr, nc)):
        sub = np.abs(a[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        i += k
        j += k
        a[[k, i], :] = a[[i, k], :]
        a[:, [k, j]] = a[:, [j, k]]
        p = a[k, k]
        pivots.append(abs(p))
        if p == 0:
            pivots.extend([0.0] * (min(nr, nc) - k - 1))
            break
        f = a[k + 1:, k] / p
        a[k + 1:, k:] -= np.outer(f, a[k, k:])
    return pivots


def rank_tol(m, tol=DEFAULT_TOL, scale=None):
    """Numerical rank: pivots larger than ``tol * max(1, max|m_ij|)``.

    ``scale`` replaces ``max(1, max|m_ij|)`` when a submatrix has to be judged
    against the magnitude of the matrix it was cut from.

    >>> rank_tol(np.ones((2, 2)))
    1
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    a = np.asarray(m, dtype=complex)
    if a.size == 0:
        return 0
    thresh = tol * (_scale(a) if scale is None else scale)
    return sum(1 for p in elimination_pivots(a) if p > thresh)


def inverse(m, tol=DEFAULT_TOL):
    """Invert a square matrix by Gauss-Jordan elimination with complete pivoting.

    Raises
    ------
    SingularMatrix
        If a pivot falls below ``tol * max(1, max|m_ij|)``.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise DimensionMismatch(f"inverse needs a square matrix, got {a.shape}")
    if n == 0:
        return a.copy()
    thresh = tol * _scale(a)
    aug = np.hstack([a, np.eye(n, dtype=complex)])
    colperm = np.arange(n)
    for k in range(n):
        sub = np.abs(aug[k:, k:n])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        i += k
        j += k
        if sub[i - k, j - k] <= thresh:
            raise SingularMatrix(f"pivot {sub[i - k, j - k]:.3e} below threshold {thresh:.3e}")
        aug[[k, i], :] = aug[[i, k], :]
        aug[:, [k, j]] = aug[:, [j, k]]
        colperm[[k, j]] = colperm[[j, k]]
        aug[k] /= aug[k, k]
        f = aug[:, k].copy()
        f[k] = 0.0
        aug -= np.outer(f, aug[k])
    # Column swaps on the left block permute the unknowns, i.e. rows of the inverse.
    inv = np.empty((n, n), dtype=complex)
    inv[colperm] = aug[:, n:]
    return inv


def is_hermitian(m, tol=DEFAULT_TOL):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("is_hermitian needs a square matrix")
    return frobenius(a - dagger(a)) <= tol * max(1.0, frobenius(a))


def is_unitary(m, tol=DEFAULT_TOL):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return frobenius(a @ dagger(a) - np.eye(a.shape[0])) <= tol * max(1.0, np.sqrt(a.shape[0]))
