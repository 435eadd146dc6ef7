"""The approximating network of a general vertex coupling.

The star vertex is replaced by ``n`` decoupled halflines whose endpoints
``V_j`` carry delta couplings ``v_j(d)``.  Selected pairs of endpoints are
joined by segments of length ``2d`` with a delta interaction ``w_{jk}(d)`` at
the midpoint and a constant vector potential ``A_(j,k)(d)`` on each half
(``A_(k,j) = -A_(j,k)``).  Which pairs are joined and how the parameters
scale with ``d`` is fixed by the ST form of the coupling.

All indices here are 1-based positions of the ST numbering, i.e. position
``k`` is edge ``f.perm[k-1]`` of the original vertex.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateDenominator

ZERO_TOL = 1e-12


def signed_modulus(c):
    """``|c|`` if ``Re c >= 0`` else ``-|c|``."""
    c = complex(c)
    return abs(c) if c.real >= 0 else -abs(c)


def _phase_arg(c):
    """Argument used for the vector potential: ``arg c`` or ``arg c - pi`` when ``Re c < 0``.

    ``exp(i * _phase_arg(c)) * signed_modulus(c) == c`` holds in both branches.
    """
    c = complex(c)
    phi = cmath.phase(c)
    return phi - math.pi if c.real < 0 else phi


@dataclass(frozen=True)
class ApproxTopology:
    n: int
    m: int
    neighbor_sets: tuple  # neighbor_sets[j-1] is the frozenset N_j
    edges: tuple  # sorted pairs (j, k), j < k

    def neighbors(self, j):
        return self.neighbor_sets[j - 1]

    @property
    def directed_halves(self):
        """The index set of segment halves ``(l, h)`` with ``h in N_l``, in a fixed order."""
        return tuple((l, h) for l in range(1, self.n + 1) for h in sorted(self.neighbors(l)))


@dataclass(frozen=True)
class ApproxParams:
    """Parameters of the approximating network at half-length ``d``.

    ``w`` is keyed by ``(j, k)`` with ``j < k``; ``a`` holds both orientations.
    """

    d: float
    topology: ApproxTopology
    v: np.ndarray
    w: dict
    a: dict

    def w_of(self, j, k):
        return self.w[(j, k) if j < k else (k, j)]

    def to_dict(self):
        key = lambda p: f"{p[0]},{p[1]}"
        return {
            "d": self.d,
            "edges": [list(e) for e in self.topology.edges],
            "v": [float(x) for x in self.v],
            "w": {key(e): float(self.w[e]) for e in self.topology.edges},
            "a": {key(e): float(self.a[e]) for e in self.topology.edges},
        }


def _nonzero(x, scale):
    return abs(x) > ZERO_TOL * scale


def neighbor_sets(f):
    """Which halfline endpoints are joined by a connecting segment."""
    n, m, S, T = f.n, f.m, f.S, f.T
    s_scale = float(np.max(np.abs(S))) if S.size else 0.0
    t_scale = float(np.max(np.abs(T))) if T.size else 0.0
    t_nz = np.abs(T) > ZERO_TOL * t_scale if T.size else np.zeros(T.shape, dtype=bool)
    sets = [set() for _ in range(n)]
    for j in range(m):
        for k in range(m):
            if k == j:
                continue
            if _nonzero(S[j, k], s_scale) or np.any(t_nz[j] & t_nz[k]):
                sets[j].add(k + 1)
        for l in range(n - m):
            if t_nz[j, l]:
                sets[j].add(m + l + 1)
                sets[m + l].add(j + 1)
    edges = sorted({(min(j, k), max(j, k)) for j in range(1, n + 1) for k in sets[j - 1]})
    return ApproxTopology(n, m, tuple(frozenset(s) for s in sets), tuple(edges))


def coupling_coefficient(f, j, k, d):
    """``d S_jk + sum_l T_jl conj(T_kl)`` for positions ``j, k <= m`` (1-based)."""
    return d * f.S[j - 1, k - 1] + np.dot(f.T[j - 1], np.conj(f.T[k - 1]))


def build_params(f, d, topology=None):
    """Closed-form ``v_j(d)``, ``w_{jk}(d)`` and ``A_(j,k)(d)``.

    Raises
    ------
    DegenerateDenominator
        If ``<d S_jk + sum_l T_jl conj(T_kl)>`` vanishes for a connected pair
        ``j, k <= m``; the strength ``w_{jk}`` is undefined at this ``d``.
    """
    if not d > 0:
        raise ValueError("d must be positive")
    topo = neighbor_sets(f) if topology is None else topology
    n, m, S, T = f.n, f.m, f.S, f.T
    nb = topo.neighbors
    w, a = {}, {}
    v = np.zeros(n)

    # Pairs (j, l) with j <= m < l: delta strength and potential from T_jl alone.
    for l in range(m + 1, n + 1):
        for j in sorted(nb(l)):
            t = T[j - 1, l - m - 1]
            w[(j, l)] = (-2.0 + 1.0 / signed_modulus(t)) / d
            a[(j, l)] = _phase_arg(t) / (2 * d)
            a[(l, j)] = -a[(j, l)]
        tsum = sum(signed_modulus(T[h - 1, l - m - 1]) for h in nb(l))
        v[l - 1] = (1.0 - len(nb(l)) + tsum) / d

    # Pairs j < k <= m.
    cmod = {}
    for j in range(1, m + 1):
        for k in sorted(nb(j)):
            if k > m or k <= j:
                continue
            c = coupling_coefficient(f, j, k, d)
            sc = signed_modulus(c)
            scale = abs(d * S[j - 1, k - 1]) + float(np.dot(np.abs(T[j - 1]), np.abs(T[k - 1])))
            if abs(sc) <= ZERO_TOL * max(scale, 1e-300):
                raise DegenerateDenominator(
                    f"<d S_jk + sum T_jl conj(T_kl)> vanishes for pair ({j},{k}) at d={d}",
                    d=d,
                    pair=(j, k),
                )
            cmod[(j, k)] = cmod[(k, j)] = sc
            w[(j, k)] = (-1.0 / sc - 2.0) / d
            a[(j, k)] = _phase_arg(c) / (2 * d)
            a[(k, j)] = -a[(j, k)]

    for j in range(1, m + 1):
        tj = [T[j - 1, l - m - 1] for l in sorted(nb(j)) if l > m]
        val = S[j - 1, j - 1].real - len(nb(j)) / d
        val -= sum(cmod[(j, k)] for k in nb(j) if k <= m) / d
        val += sum((1.0 + signed_modulus(t)) * signed_modulus(t) for t in tj) / d
        v[j - 1] = val

    return ApproxParams(float(d), topo, v, w, a)


@dataclass
class LimitCheckReport:
    """Limit quantities of the parameter choice along a decreasing sequence of ``d``.

    Each entry maps an index tuple to ``(values_per_d, target)``:

    * ``endpoint_sum[(j,)]`` for ``j > m``: ``d v_j + #N_j - sum_k 1/(2 + d w_jk)``;
    * ``outer_pairs[(j, k)]`` for ``j > m``: ``1/(2 + d w_jk)``;
    * ``inner_pairs[(j, k)]`` for connected ``j, k <= m``: ``1/(2 + d w_jk)``.
    """

    d_values: list
    endpoint_sum: dict = field(default_factory=dict)
    outer_pairs: dict = field(default_factory=dict)
    inner_pairs: dict = field(default_factory=dict)

    def max_deviation(self):
        """Largest ``|value - target|`` over all conditions and all ``d``."""
        dev = 0.0
        for cond in (self.endpoint_sum, self.outer_pairs, self.inner_pairs):
            for values, target in cond.values():
                dev = max(dev, max(abs(x - target) for x in values))
        return dev

    @property
    def finite_limits(self):
        """Endpoint and outer-pair targets must be nonzero and finite; inner-pair targets finite."""
        return {
            "endpoint_sum": all(t != 0 and math.isfinite(t) for _, t in self.endpoint_sum.values()),
            "outer_pairs": all(t != 0 and math.isfinite(t) for _, t in self.outer_pairs.values()),
            "inner_pairs": all(math.isfinite(t) for _, t in self.inner_pairs.values()),
        }


def check_limits(f, d_sequence):
    """Evaluate the limit conditions behind the parameter choice.

    For ``j > m``: ``d v_j + #N_j - sum_k 1/(2 + d w_jk)`` (target 1) and
    ``1/(2 + d w_jk)`` (target ``<T_kj>``).  For connected ``j, k <= m``:
    ``1/(2 + d w_jk)``, whose limit is ``-<sum_l T_jl conj(T_kl)>``.
    """
    topo = neighbor_sets(f)
    n, m = f.n, f.m
    report = LimitCheckReport(list(d_sequence))
    params = [build_params(f, d, topo) for d in d_sequence]
    for j in range(m + 1, n + 1):
        nbj = sorted(topo.neighbors(j))
        if not nbj:
            continue
        vals = [p.d * p.v[j - 1] + len(nbj) - sum(1.0 / (2 + p.d * p.w_of(j, k)) for k in nbj) for p in params]
        report.endpoint_sum[(j,)] = (vals, 1.0)
        for k in nbj:
            vals = [1.0 / (2 + p.d * p.w_of(j, k)) for p in params]
            report.outer_pairs[(j, k)] = (vals, signed_modulus(f.T[k - 1, j - m - 1]))
    for j in range(1, m + 1):
        for k in sorted(topo.neighbors(j)):
            if k > m:
                continue
            vals = [1.0 / (2 + p.d * p.w_of(j, k)) for p in params]
            target = -signed_modulus(coupling_coefficient(f, j, k, 0.0))
            report.inner_pairs[(j, k)] = (vals, target)
    return report
