"""Vertex couplings ``A psi(0) + B psi'(0) = 0`` and their canonical ST form.

A coupling of a degree-``n`` vertex is admissible when ``rank(A|B) = n`` and
``A B^*`` is Hermitian.  Every admissible coupling can be brought, after a
renumbering of the edges, to the unique form

    [[I, T], [0, 0]] psi'(0) = [[S, 0], [-T^*, I]] psi(0)

with ``m = rank(B)``, ``S`` Hermitian ``m x m`` and ``T`` of size
``m x (n-m)``.  :func:`to_st_form` performs that reduction deterministically
(lexicographically smallest column and row choices).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotAdmissible, NotUnitary, RankAmbiguous
from .linalg import (
    DEFAULT_TOL,
    as_cmatrix,
    dagger,
    elimination_pivots,
    frobenius,
    inverse,
    is_unitary,
    rank_tol,
)

# Pivots of B within this factor of the rank threshold make m undecidable.
RANK_AMBIGUITY_FACTOR = 1e3


@dataclass(frozen=True, eq=False)
class Coupling:
    """Boundary-condition pair ``(A, B)`` of a vertex of degree ``n``."""

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = as_cmatrix(self.A)
        B = as_cmatrix(self.B)
        if A.shape[0] != A.shape[1] or B.shape != A.shape:
            raise DimensionMismatch(f"A {A.shape} and B {B.shape} must be square of equal size")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self):
        return self.A.shape[0]


@dataclass(frozen=True, eq=False)
class STForm:
    """Canonical coupling data ``(n, m, perm, S, T)``.

    ``perm`` is 1-based: the k-th row/column of the ST equation refers to
    edge ``perm[k-1]`` of the original numbering.  Columns of ``T`` belong to
    positions ``m+1..n`` of the permuted numbering.
    """

    n: int
    m: int
    perm: tuple
    S: np.ndarray
    T: np.ndarray

    def __post_init__(self):
        n, m = int(self.n), int(self.m)
        if not 0 <= m <= n:
            raise ValueError(f"need 0 <= m <= n, got m={m}, n={n}")
        perm = tuple(int(p) for p in self.perm)
        if sorted(perm) != list(range(1, n + 1)):
            raise ValueError(f"perm must be a permutation of 1..{n}, got {perm}")
        S = as_cmatrix(np.asarray(self.S, dtype=complex).reshape(m, m), m, m)
        T = as_cmatrix(np.asarray(self.T, dtype=complex).reshape(m, n - m), m, n - m)
        if frobenius(S - dagger(S)) > 1e-10 * max(1.0, frobenius(S)):
            raise ValueError("S must be Hermitian")
        for name, value in (("n", n), ("m", m), ("perm", perm), ("S", S), ("T", T)):
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class AdmissibilityReport:
    rank_ok: bool
    hermitian_ok: bool
    rank_found: int
    hermiticity_defect: float

    @property
    def admissible(self):
        return self.rank_ok and self.hermitian_ok

    def to_dict(self):
        return {
            "admissible": self.admissible,
            "rank_ok": self.rank_ok,
            "hermitian_ok": self.hermitian_ok,
            "rank_found": self.rank_found,
            "hermiticity_defect": self.hermiticity_defect,
        }


def validate(c, tol=DEFAULT_TOL):
    """Check both admissibility conditions on ``c``."""
    A, B = c.A, c.B
    rank_found = rank_tol(np.hstack([A, B]), tol)
    ab = A @ dagger(B)
    defect = frobenius(ab - dagger(ab)) / max(1.0, frobenius(ab))
    return AdmissibilityReport(
        rank_ok=rank_found == c.n,
        hermitian_ok=defect <= tol,
        rank_found=rank_found,
        hermiticity_defect=defect,
    )


def _require_admissible(c, tol):
    report = validate(c, tol)
    if not report.admissible:
        raise NotAdmissible(
            f"coupling is not admissible (rank {report.rank_found}/{c.n}, "
            f"hermiticity defect {report.hermiticity_defect:.3e})"
        )


def from_unitary(U, tol=DEFAULT_TOL):
    """Coupling ``(U - I) psi + i (U + I) psi' = 0`` of a unitary ``U``."""
    U = as_cmatrix(U)
    if not is_unitary(U, tol):
        raise NotUnitary("U is not unitary within tolerance")
    eye = np.eye(U.shape[0])
    return Coupling(U - eye, 1j * (U + eye))


def coupling_unitary(c):
    """The unique unitary ``U`` describing the same coupling as ``c``.

    ``A + iB`` is invertible for every admissible pair and
    ``U = -(A + iB)^{-1} (A - iB)``.
    """
    return -inverse(c.A + 1j * c.B) @ (c.A - 1j * c.B)


def delta_unitary(n, alpha):
    if n < 1:
        raise ValueError("n must be >= 1")
    return np.full((n, n), 2.0 / (n + 1j * alpha), dtype=complex) - np.eye(n)


def delta_coupling(n, alpha):
    """ST form of the delta coupling: ``m = 1``, ``S = [alpha]``, ``T`` all ones."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return STForm(n, 1, tuple(range(1, n + 1)), [[alpha]], np.ones((1, n - 1)))


def delta_coupling_direct(n, alpha):
    """The delta coupling written row by row: continuity plus the derivative sum."""
    A = np.zeros((n, n), dtype=complex)
    B = np.zeros((n, n), dtype=complex)
    for j in range(n - 1):
        A[j, j], A[j, j + 1] = 1.0, -1.0
    A[n - 1, 0] = -alpha
    B[n - 1, :] = 1.0
    return Coupling(A, B)


def _perm_matrix(perm):
    n = len(perm)
    P = np.zeros((n, n))
    P[np.arange(n), np.asarray(perm) - 1] = 1.0
    return P


def st_to_coupling(f):
    """Write the ST form as ``A psi + B psi' = 0`` in the original edge numbering.

    In permuted variables ``A~ = [[-S, 0], [T^*, -I]]`` and ``B~ = [[I, T], [0, 0]]``;
    returning to the original numbering multiplies by the permutation from the right.
    """
    n, m = f.n, f.m
    At = np.zeros((n, n), dtype=complex)
    Bt = np.zeros((n, n), dtype=complex)
    At[:m, :m] = -f.S
    At[m:, :m] = dagger(f.T)
    At[m:, m:] = -np.eye(n - m)
    Bt[:m, :m] = np.eye(m)
    Bt[:m, m:] = f.T
    P = _perm_matrix(f.perm)
    return Coupling(At @ P, Bt @ P)


def _greedy_independent(columns, scale, tol):
    """Indices of the lexicographically first maximal independent set of columns."""
    chosen = []
    for j in range(columns.shape[1]):
        trial = chosen + [j]
        if rank_tol(columns[:, trial], tol, scale=scale) == len(trial):
            chosen = trial
    return chosen


def to_st_form(c, tol=DEFAULT_TOL):
    """Reduce an admissible coupling to its canonical ST form.

    The column choice is the lexicographically smallest independent set of
    columns of ``B``; together with the remaining columns in increasing order
    this is the lexicographically smallest admissible permutation.

    Raises
    ------
    NotAdmissible
        If ``c`` fails the admissibility conditions.
    RankAmbiguous
        If a pivot of ``B`` lies within ``RANK_AMBIGUITY_FACTOR`` of the rank
        threshold, so ``m`` cannot be decided reliably.
    """
    _require_admissible(c, tol)
    A, B, n = c.A, c.B, c.n
    scale = max(1.0, float(np.max(np.abs(np.hstack([A, B])))))
    thresh = tol * scale
    for p in elimination_pivots(B):
        if thresh / RANK_AMBIGUITY_FACTOR < p <= thresh * RANK_AMBIGUITY_FACTOR:
            raise RankAmbiguous(f"pivot {p:.3e} of B is too close to threshold {thresh:.3e}")
    m = rank_tol(B, tol, scale=scale)

    cols = _greedy_independent(B, scale, tol)
    assert len(cols) == m
    order = cols + [j for j in range(n) if j not in cols]
    At, Bt = A[:, order], B[:, order]

    rows = _greedy_independent(Bt[:, :m].T, scale, tol)
    row_order = rows + [i for i in range(n) if i not in rows]
    Ac, Bc = At[row_order], Bt[row_order]

    # Clear the last n-m rows of B using the first m.
    B11_inv = inverse(Bc[:m, :m], tol)
    F = Bc[m:, :m] @ B11_inv
    Ah = Ac.copy()
    Ah[m:] -= F @ Ac[:m]

    A1 = B11_inv @ Ah[:m]
    B12 = B11_inv @ Bc[:m, m:]
    A11, A12 = A1[:, :m], A1[:, m:]
    A22 = Ah[m:, m:]
    inverse(A22, tol)  # A22 must be regular for an admissible coupling

    S = -(A11 + A12 @ dagger(B12))
    S = 0.5 * (S + dagger(S))
    perm = tuple(j + 1 for j in order)
    return STForm(n, m, perm, S, B12)


def couplings_equivalent(c1, c2, tol=1e-9):
    """True iff both pairs span the same row space, i.e. define the same coupling."""
    _require_admissible(c1, tol)
    _require_admissible(c2, tol)
    if c1.n != c2.n:
        raise DimensionMismatch("couplings have different degrees")
    j1 = np.hstack([c1.A, c1.B])
    j2 = np.hstack([c2.A, c2.B])
    j1 = j1 / np.max(np.abs(j1))
    j2 = j2 / np.max(np.abs(j2))
    return rank_tol(np.vstack([j1, j2]), tol) == c1.n


def equivalence_defect(c1, c2):
    """Frobenius distance between the unitaries of two couplings (0 iff equivalent)."""
    return frobenius(coupling_unitary(c1) - coupling_unitary(c2))


def st_forms_close(f1, f2, tol=1e-9):
    return (
        f1.n == f2.n
        and f1.m == f2.m
        and f1.perm == f2.perm
        and frobenius(f1.S - f2.S) <= tol
        and frobenius(f1.T - f2.T) <= tol
    )


def parameter_count(f):
    """Number of real parameters of the ST family, ``m (2n - m)``."""
    return f.m * (2 * f.n - f.m)
