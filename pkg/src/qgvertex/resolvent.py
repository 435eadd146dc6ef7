"""Green's functions of the star graph and of its approximating network.

Both resolvents are evaluated at ``k^2 = -kappa^2`` with ``Re kappa > 0`` and
are built by Krein's formula on top of decoupled Dirichlet edges:

* the star graph needs the ``n x n`` coefficient matrix ``Lambda``;
* the approximating network needs the inverse of the matrix ``M_d`` plus the
  coefficient tables for the segment ends, all of which are closed-form
  multiples of entries of ``M_d^{-1}``.

Edge indices follow the ST numbering of :mod:`qgvertex.coupling`.  Row and
column indices of the network kernel are either an int ``j`` (halfline) or a
pair ``(l, h)`` (the half of the ``{l, h}`` segment attached to ``V_l``).
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .coupling import STForm, st_to_coupling
from .errors import DomainViolation, KappaTooSmall, SingularM, SingularMatrix
from .linalg import dagger, frobenius, inverse


def default_kappa(f):
    """``1 + 2 max(1, ||S||_F)``: large enough for ``S + kappa (I + T T^*)`` to be regular."""
    return 1.0 + 2.0 * max(1.0, frobenius(f.S))


@dataclass(frozen=True)
class SpectralPoint:
    kappa: complex

    def __post_init__(self):
        if not complex(self.kappa).real > 0:
            raise ValueError("Re kappa must be positive")
        object.__setattr__(self, "kappa", complex(self.kappa))

    @property
    def k2(self):
        return -self.kappa**2


def halfline_kernel(kappa, x, y):
    """Dirichlet halfline kernel ``sinh(kappa x_<) exp(-kappa x_>) / kappa``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    lo, hi = np.minimum(x, y), np.maximum(x, y)
    return (np.exp(kappa * (lo - hi)) - np.exp(-kappa * (lo + hi))) / (2 * kappa)


def segment_kernel(kappa, d, a_pot, x, y):
    """Dirichlet kernel of a segment ``[0, d]`` carrying a constant vector potential."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    lo, hi = np.minimum(x, y), np.maximum(x, y)
    base = np.sinh(kappa * lo) * np.sinh(kappa * (d - hi)) / (kappa * np.sinh(kappa * d))
    return np.exp(1j * a_pot * (x - y)) * base


def _st_identity(f):
    return STForm(f.n, f.m, tuple(range(1, f.n + 1)), f.S, f.T)


@dataclass(frozen=True, eq=False)
class ResolventAd:
    spectral: SpectralPoint
    st: STForm
    Lambda: np.ndarray

    @property
    def kappa(self):
        return self.spectral.kappa


def lambda_direct(f, sp):
    """``(A - kappa B)^{-1} (-B)`` from the ST coupling matrices (ST numbering)."""
    c = st_to_coupling(_st_identity(f))
    try:
        return inverse(c.A - sp.kappa * c.B) @ (-c.B)
    except SingularMatrix as exc:
        raise KappaTooSmall(f"A - kappa B is singular at kappa={sp.kappa}") from exc


def lambda_block(f, sp):
    """Block formula with ``R = (S + kappa I + kappa T T^*)^{-1}``."""
    m, kappa = f.m, sp.kappa
    try:
        R = inverse(f.S + kappa * np.eye(m) + kappa * f.T @ dagger(f.T))
    except SingularMatrix as exc:
        raise KappaTooSmall(f"S + kappa (I + T T^*) is singular at kappa={kappa}") from exc
    RT = R @ f.T
    return np.block([[R, RT], [dagger(f.T) @ R, dagger(f.T) @ RT]]) if f.n else R


def lambda_ad(f, sp, tol=1e-10):
    """Krein coefficients of the star graph, cross-checked by two routes."""
    lam = lambda_block(f, sp)
    direct = lambda_direct(f, sp)
    if frobenius(lam - direct) > tol * max(1.0, frobenius(lam)):
        raise KappaTooSmall(
            f"block and direct Lambda disagree by {frobenius(lam - direct):.3e}; increase Re kappa"
        )
    return ResolventAd(sp, f, lam)


def eval_kernel_ad(r, j, l, x, y):
    """Star-graph kernel with ``x`` on halfline ``j`` and ``y`` on halfline ``l``."""
    kappa = r.kappa
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    out = r.Lambda[j - 1, l - 1] * np.exp(-kappa * x) * np.exp(-kappa * y)
    if j == l:
        out = out + halfline_kernel(kappa, x, y)
    return out


def boundary_residual_ad(r, y_sample, column=None):
    """Residual ``|A g(0) + B g'(0)|`` per row for a source at ``y_sample``.

    ``g`` is the column of the kernel belonging to the source edge; with
    ``column=None`` the maximum over all source edges is returned.
    """
    c = st_to_coupling(_st_identity(r.st))
    kappa, n = r.kappa, r.st.n
    ey = np.exp(-kappa * y_sample)
    cols = range(1, n + 1) if column is None else [column]
    res = np.zeros(n)
    for l in cols:
        g0 = r.Lambda[:, l - 1] * ey
        g1 = -kappa * r.Lambda[:, l - 1] * ey
        g1[l - 1] += ey
        res = np.maximum(res, np.abs(c.A @ g0 + c.B @ g1))
    return res


class ResolventAg:
    """Krein data of the approximating network at one ``(d, kappa)``."""

    def __init__(self, params, spectral, Minv=None, M=None):
        self.params = params
        self.spectral = spectral
        self.M = M
        self.Minv = Minv
        topo = params.topology
        self.n = topo.n
        self.halves = topo.directed_halves
        kappa, d = spectral.kappa, params.d
        self.sh = np.sinh(kappa * d)
        self.ch = np.cosh(kappa * d)
        # 2 kappa cosh(kappa d) + w sinh(kappa d) for every half
        self.den = {p: 2 * kappa * self.ch + params.w_of(*p) * self.sh for p in self.halves}
        self.phase = {p: np.exp(1j * d * params.a[p]) for p in self.halves}

    @property
    def kappa(self):
        return self.spectral.kappa

    @property
    def d(self):
        return self.params.d

    @property
    def index_set(self):
        return tuple(range(1, self.n + 1)) + self.halves

    def pot(self, p):
        return self.params.a[p]

    # --- coefficient tables, one entry at a time -------------------------
    def lam_nn(self, j, jp):
        return self.Minv[j - 1, jp - 1]

    def lam_n0(self, j, q):
        return self.phase[q] / self.sh * self.Minv[j - 1, q[0] - 1]

    def lam_nd(self, j, q):
        k = self.kappa
        return k / self.sh / self.den[q] * self._colpair(q, lambda i: self.Minv[j - 1, i - 1])

    def lam_0n(self, p, jp):
        return np.conj(self.phase[p]) / self.sh * self.Minv[p[0] - 1, jp - 1]

    def lam_00(self, p, q):
        return np.conj(self.phase[p]) / self.sh * self.phase[q] / self.sh * self.Minv[p[0] - 1, q[0] - 1]

    def lam_0d(self, p, q):
        k = self.kappa
        return (np.conj(self.phase[p]) / self.sh**2 * k / self.den[q]
                * self._colpair(q, lambda i: self.Minv[p[0] - 1, i - 1]))

    def _pair(self, p, col_of):
        # a row on half (l, h) sees both endpoints l and h through the midpoint vertex
        l, h = p
        return np.conj(self.phase[p]) * col_of(l) + np.conj(self.phase[(h, l)]) * col_of(h)

    def _colpair(self, q, row_of):
        # a source on half (l, h) drives both endpoints l and h through the midpoint vertex
        l, h = q
        return self.phase[q] * row_of(l) + self.phase[(h, l)] * row_of(h)

    def lam_dn(self, p, jp):
        k = self.kappa
        return k / self.den[p] / self.sh * self._pair(p, lambda i: self.Minv[i - 1, jp - 1])

    def lam_d0(self, p, q):
        k = self.kappa
        return (k / self.den[p] * self.phase[q] / self.sh**2
                * self._pair(p, lambda i: self.Minv[i - 1, q[0] - 1]))

    def lam_dd(self, p, q):
        k = self.kappa
        inner = (k / self.sh / self.den[q]
                 * self._pair(p, lambda i: self._colpair(q, lambda c: self.Minv[i - 1, c - 1])))
        if p == q or p == q[::-1]:
            inner += 1.0 / k
        return k / self.den[p] / self.sh * inner

    def lambda_tables(self):
        """All nine tables as dicts keyed by index pairs."""
        n_idx = range(1, self.n + 1)
        H = self.halves
        return {
            "nn": {(j, jp): self.lam_nn(j, jp) for j in n_idx for jp in n_idx},
            "n0": {(j, q): self.lam_n0(j, q) for j in n_idx for q in H},
            "nd": {(j, q): self.lam_nd(j, q) for j in n_idx for q in H},
            "0n": {(p, jp): self.lam_0n(p, jp) for p in H for jp in n_idx},
            "00": {(p, q): self.lam_00(p, q) for p in H for q in H},
            "0d": {(p, q): self.lam_0d(p, q) for p in H for q in H},
            "dn": {(p, jp): self.lam_dn(p, jp) for p in H for jp in n_idx},
            "d0": {(p, q): self.lam_d0(p, q) for p in H for q in H},
            "dd": {(p, q): self.lam_dd(p, q) for p in H for q in H},
        }

    # --- kernel evaluation ------------------------------------------------
    def _check(self, idx, coord):
        coord = np.asarray(coord, dtype=float)
        if np.any(coord < 0) or (not isinstance(idx, (int, np.integer)) and np.any(coord > self.d * (1 + 1e-12))):
            raise DomainViolation(f"coordinate out of range for index {idx}")
        if isinstance(idx, (int, np.integer)):
            if not 1 <= idx <= self.n:
                raise DomainViolation(f"no halfline {idx}")
        elif idx not in self.phase:
            raise DomainViolation(f"no segment half {idx}")
        return coord

    def eval_kernel(self, row, col, x, y):
        """Kernel entry for ``x`` on edge ``row`` and ``y`` on edge ``col``."""
        x = self._check(row, x)
        y = self._check(col, y)
        k, d = self.kappa, self.d
        row_half = isinstance(row, tuple)
        col_half = isinstance(col, tuple)
        if not row_half and not col_half:
            out = self.lam_nn(row, col) * np.exp(-k * x) * np.exp(-k * y)
            if row == col:
                out = out + halfline_kernel(k, x, y)
            return out
        if not row_half:
            q = col
            return (np.exp(-k * x) * np.exp(-1j * self.pot(q) * y)
                    * (self.lam_n0(row, q) * np.sinh(k * y) + self.lam_nd(row, q) * np.sinh(k * (d - y))))
        if not col_half:
            p = row
            return (np.exp(1j * self.pot(p) * x)
                    * (self.lam_0n(p, col) * np.sinh(k * x) + self.lam_dn(p, col) * np.sinh(k * (d - x)))
                    * np.exp(-k * y))
        p, q = row, col
        out = (np.exp(1j * self.pot(p) * x) * np.exp(-1j * self.pot(q) * y)
               * (np.sinh(k * x) * (self.lam_00(p, q) * np.sinh(k * y) + self.lam_0d(p, q) * np.sinh(k * (d - y)))
                  + np.sinh(k * (d - x)) * (self.lam_d0(p, q) * np.sinh(k * y)
                                            + self.lam_dd(p, q) * np.sinh(k * (d - y)))))
        if p == q:
            out = out + segment_kernel(k, d, self.pot(p), x, y)
        return out


def m_matrix(params, sp):
    """The ``n x n`` matrix whose inverse is the halfline block of the network's Krein matrix."""
    topo = params.topology
    n, d, k = topo.n, params.d, sp.kappa
    sh, ch = np.sinh(k * d), np.cosh(k * d)
    M = np.zeros((n, n), dtype=complex)
    for j in range(1, n + 1):
        nbj = sorted(topo.neighbors(j))
        diag = k + k * len(nbj) * ch / sh + params.v[j - 1]
        for h in nbj:
            den = 2 * k * ch + params.w_of(j, h) * sh
            diag -= k / sh * k / den
            M[j - 1, h - 1] = -k / sh * k * np.exp(2j * d * params.a[(j, h)]) / den
        M[j - 1, j - 1] = diag
    return M


def assemble_m(params, sp):
    M = m_matrix(params, sp)
    try:
        Minv = inverse(M)
    except SingularMatrix as exc:
        raise SingularM(f"M_d is singular at d={params.d}", d=params.d) from exc
    return ResolventAg(params, sp, Minv=Minv, M=M)
