"""Hilbert-Schmidt distance between the network resolvent and the star resolvent.

The star resolvent is extended by zero to the connecting segments, so the
kernel difference splits into four blocks:

* halfline x halfline: ``(Minv - Lambda)_{jj'} exp(-kappa x) exp(-kappa y)``,
  integrated in closed form;
* halfline x segment, segment x halfline and segment x segment: the network
  kernel itself, integrated by Gauss-Legendre product quadrature.

The HS norm is the square root of the sum of the four squared contributions.
"""

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .approximation import build_params
from .errors import InsufficientPoints, QuadratureNotConverged
from .resolvent import SpectralPoint, assemble_m, default_kappa, lambda_ad

# Relative change of the total under node doubling that is still accepted.
NODE_DOUBLING_RTOL = 1e-4


@dataclass(frozen=True)
class QuadConfig:
    """Quadrature settings.

    ``x_max=None`` truncates halflines at ``20 / Re kappa``.  The truncation is
    accepted when the discarded weight ``exp(-2 Re kappa x_max)`` is below
    ``tail_tol``.
    """

    x_max: float = None
    nodes_halfline: int = 64
    nodes_segment: int = 64
    tail_tol: float = 1e-12
    check_doubling: bool = True

    def __post_init__(self):
        if self.nodes_halfline < 2 or self.nodes_segment < 2:
            raise ValueError("need at least 2 quadrature nodes")
        if self.x_max is not None and not self.x_max > 0:
            raise ValueError("x_max must be positive")
        if self.tail_tol < 0:
            raise ValueError("tail_tol must be nonnegative")

    def truncation(self, kappa):
        re = complex(kappa).real
        x_max = 20.0 / re if self.x_max is None else float(self.x_max)
        if np.exp(-2 * re * x_max) > self.tail_tol:
            raise ValueError(f"x_max={x_max} leaves a tail above tail_tol={self.tail_tol}")
        return x_max

    def doubled(self):
        return QuadConfig(self.x_max, 2 * self.nodes_halfline, 2 * self.nodes_segment,
                          self.tail_tol, check_doubling=False)


@dataclass(frozen=True)
class KernelDifferenceBlockNorms:
    """Squared HS contributions of the four blocks."""

    nn: float
    nJ: float
    Jn: float
    JJ: float

    @property
    def total(self):
        return self.nn + self.nJ + self.Jn + self.JJ

    @property
    def hs_norm(self):
        return float(np.sqrt(self.total))


@dataclass
class ConvergenceReport:
    kappa: complex
    d_values: list
    hs_norms: list
    slope: float
    intercept: float
    blocks: list = field(default_factory=list)
    envelope_constant: float = float("nan")
    envelope_holds: bool = False

    @property
    def strictly_decreasing(self):
        return all(b < a for a, b in zip(self.hs_norms, self.hs_norms[1:]))

    def to_csv(self):
        lines = ["d,hs_norm,nn,nJ,Jn,JJ"]
        for d, h, b in zip(self.d_values, self.hs_norms, self.blocks):
            lines.append(f"{d!r},{h!r},{b.nn!r},{b.nJ!r},{b.Jn!r},{b.JJ!r}")
        lines.append(f"# slope={self.slope!r} intercept={self.intercept!r}")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        k = complex(self.kappa)
        return {
            "kappa": [k.real, k.imag],
            "d_values": list(self.d_values),
            "hs_norms": list(self.hs_norms),
            "slope": self.slope,
            "intercept": self.intercept,
            "blocks": [asdict(b) for b in self.blocks],
            "envelope_constant": self.envelope_constant,
            "envelope_holds": self.envelope_holds,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def hs_nn_closed_form(delta_lambda, kappa):
    """``sum |delta_lambda|^2 / (2 Re kappa)^2``."""
    re = complex(kappa).real
    if not re > 0:
        raise ValueError("Re kappa must be positive")
    return float(np.sum(np.abs(np.asarray(delta_lambda)) ** 2)) / (2 * re) ** 2


def _halfline_rule(kappa, x_max, nodes):
    t, w = leggauss(nodes)
    split = 1.0 / complex(kappa).real
    xs, ws = [], []
    for a, b in ((0.0, split), (split, x_max)):
        xs.append(0.5 * (b - a) * t + 0.5 * (b + a))
        ws.append(0.5 * (b - a) * w)
    return np.concatenate(xs), np.concatenate(ws)


def _segment_rule(d, nodes):
    t, w = leggauss(nodes)
    return 0.5 * d * (t + 1), 0.5 * d * w


def _block_integrals(r, q):
    """Squared norms of the three blocks touching segments, by product quadrature."""
    x_max = q.truncation(r.kappa)
    xh, wh = _halfline_rule(r.kappa, x_max, q.nodes_halfline)
    xs, ws = _segment_rule(r.d, q.nodes_segment)
    halves = r.halves
    n_idx = range(1, r.n + 1)

    def integrate(row, col, x, wx, y, wy):
        vals = r.eval_kernel(row, col, x[:, None], y[None, :])
        return float(wx @ (np.abs(vals) ** 2) @ wy)

    # The diagonal segment blocks have a kink along x = y; integrate each
    # triangle with its own rule so the integrand is smooth on every piece.
    t, w = _segment_rule(1.0, q.nodes_segment)
    y_col = xs[:, None]
    x_lo, w_lo = xs[:, None] * t[None, :], ws[:, None] * xs[:, None] * w[None, :]
    x_hi = xs[:, None] + (r.d - xs[:, None]) * t[None, :]
    w_hi = ws[:, None] * (r.d - xs[:, None]) * w[None, :]

    def integrate_diagonal(p):
        lo = np.abs(r.eval_kernel(p, p, x_lo, y_col)) ** 2
        hi = np.abs(r.eval_kernel(p, p, x_hi, y_col)) ** 2
        return float(np.sum(w_lo * lo) + np.sum(w_hi * hi))

    nJ = sum(integrate(j, p, xh, wh, xs, ws) for j in n_idx for p in halves)
    Jn = sum(integrate(p, j, xs, ws, xh, wh) for p in halves for j in n_idx)
    JJ = sum(integrate_diagonal(p) if p == p2 else integrate(p, p2, xs, ws, xs, ws)
             for p in halves for p2 in halves)
    return nJ, Jn, JJ


def block_norms(r_ag, Lambda, q=QuadConfig()):
    """Block contributions for an assembled network resolvent against ``Lambda``.

    Raises
    ------
    QuadratureNotConverged
        If doubling the node counts moves the total by more than
        ``NODE_DOUBLING_RTOL`` relative.
    """
    nn = hs_nn_closed_form(r_ag.Minv - Lambda, r_ag.kappa)
    nJ, Jn, JJ = _block_integrals(r_ag, q)
    out = KernelDifferenceBlockNorms(nn, nJ, Jn, JJ)
    if q.check_doubling and r_ag.halves:
        fine = KernelDifferenceBlockNorms(nn, *_block_integrals(r_ag, q.doubled()))
        if abs(fine.total - out.total) > NODE_DOUBLING_RTOL * max(out.total, 1e-300):
            raise QuadratureNotConverged(
                f"node doubling changed the HS total from {out.total:.6e} to {fine.total:.6e}",
                d=r_ag.d,
            )
    return out


def hs_norm_difference(f, d, sp, q=QuadConfig()):
    """Squared HS contributions of ``G_network(d) - G_star`` per block."""
    lam = lambda_ad(f, sp).Lambda
    r = assemble_m(build_params(f, d), sp)
    return block_norms(r, lam, q)


DEFAULT_D_VALUES = (0.2, 0.1, 0.05, 0.025, 0.0125)


def convergence_sweep(f, d_values=DEFAULT_D_VALUES, sp=None, q=QuadConfig()):
    """HS distance along a decreasing ``d`` grid with a log-log rate fit.

    The envelope ``C sqrt(d)`` uses ``C`` fitted at the largest ``d``; it
    holds when every later norm stays below it.
    """
    d_values = [float(d) for d in d_values]
    if len(d_values) < 3:
        raise InsufficientPoints(f"need at least 3 d-values, got {len(d_values)}")
    if any(b >= a for a, b in zip(d_values, d_values[1:])) or d_values[-1] <= 0:
        raise ValueError("d-values must be positive and strictly decreasing")
    sp = SpectralPoint(default_kappa(f)) if sp is None else sp
    lam = lambda_ad(f, sp).Lambda
    blocks = [block_norms(assemble_m(build_params(f, d), sp), lam, q) for d in d_values]
    hs = [b.hs_norm for b in blocks]
    if all(h > 0 for h in hs):
        slope, intercept = np.polyfit(np.log(d_values), np.log(hs), 1)
    else:
        slope = intercept = float("nan")
    c = hs[0] / np.sqrt(d_values[0])
    holds = all(h <= c * np.sqrt(d) * (1 + 1e-12) for d, h in zip(d_values, hs))
    return ConvergenceReport(sp.kappa, d_values, hs, float(slope), float(intercept),
                             blocks, float(c), bool(holds))
