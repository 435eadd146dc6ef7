"""Command-line front end.

Exit codes: 0 success, 1 domain failure (inadmissible coupling, envelope
violated), 2 input or numerical failure.
"""

import argparse
import sys

import numpy as np

from . import documents
from .approximation import build_params
from .convergence import DEFAULT_D_VALUES, QuadConfig, convergence_sweep
from .coupling import st_to_coupling, to_st_form, validate
from .errors import (
    DegenerateDenominator,
    DocumentError,
    InsufficientPoints,
    KappaTooSmall,
    NotAdmissible,
    QGVertexError,
    QuadratureNotConverged,
    RankAmbiguous,
    SingularM,
)
from .linalg import DEFAULT_TOL
from .resolvent import SpectralPoint, assemble_m, default_kappa

EXIT_OK, EXIT_DOMAIN, EXIT_INPUT = 0, 1, 2


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _d_list(text):
    try:
        return [_positive(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad d-list {text!r}") from exc


def _emit(text, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_st(path, tol):
    kind, obj = documents.load_document(path)
    return obj if kind == "st" else to_st_form(obj, tol)


def _spectral(args, f):
    return SpectralPoint(default_kappa(f) if args.kappa is None else args.kappa)


def cmd_validate(args):
    kind, obj = documents.load_document(args.input)
    if kind == "st":
        obj = st_to_coupling(obj)
    report = validate(obj, args.tol)
    _emit(documents.dumps(report.to_dict()), args.output)
    return EXIT_OK if report.admissible else EXIT_DOMAIN


def cmd_normalize(args):
    f = _load_st(args.input, args.tol)
    _emit(documents.dumps(documents.st_to_doc(f)), args.output)
    return EXIT_OK


def cmd_build(args):
    f = _load_st(args.input, args.tol)
    _emit(documents.dumps(build_params(f, args.d).to_dict()), args.output)
    return EXIT_OK


def _fmt_index(idx):
    return f"{idx[0]}:{idx[1]}" if isinstance(idx, tuple) else str(idx)


def cmd_kernel(args):
    f = _load_st(args.input, args.tol)
    r = assemble_m(build_params(f, args.d), _spectral(args, f))
    x_max = 20.0 / r.kappa.real if args.xmax is None else args.xmax
    grids = {}
    for idx in r.index_set:
        end = r.d if isinstance(idx, tuple) else x_max
        grids[idx] = np.linspace(0.0, end, args.points)
    lines = ["row_index,col_index,x,y,re,im"]
    for row in r.index_set:
        for col in r.index_set:
            vals = r.eval_kernel(row, col, grids[row][:, None], grids[col][None, :])
            for i, x in enumerate(grids[row]):
                for j, y in enumerate(grids[col]):
                    z = complex(vals[i, j])
                    lines.append(f"{_fmt_index(row)},{_fmt_index(col)},{float(x)!r},{float(y)!r},{z.real!r},{z.imag!r}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_converge(args):
    f = _load_st(args.input, args.tol)
    q = QuadConfig(x_max=args.xmax, nodes_halfline=args.nodes, nodes_segment=args.nodes)
    report = convergence_sweep(f, args.d_list, _spectral(args, f), q)
    _emit(report.to_json() + "\n" if args.format == "json" else report.to_csv(), args.output)
    if not report.envelope_holds:
        print("C*sqrt(d) envelope violated", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="qgvertex", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("input", help="coupling or ST-form JSON document")
        sp.add_argument("-o", "--output", help="write here instead of standard output")
        sp.add_argument("--tol", type=_positive, default=DEFAULT_TOL, help="rank/hermiticity tolerance")

    common(sub.add_parser("validate", help="check admissibility of a coupling"))
    common(sub.add_parser("normalize", help="emit the canonical ST form"))
    b = sub.add_parser("build", help="emit the approximating network at half-length d")
    common(b)
    b.add_argument("--d", type=_positive, required=True)
    k = sub.add_parser("kernel", help="sample the network Green's function as CSV")
    common(k)
    k.add_argument("--d", type=_positive, required=True)
    k.add_argument("--kappa", type=_positive)
    k.add_argument("--xmax", type=_positive, help="halfline sampling range (default 20/kappa)")
    k.add_argument("--points", type=int, default=5, help="samples per edge")
    c = sub.add_parser("converge", help="HS-norm convergence sweep as CSV")
    common(c)
    c.add_argument("--d-list", type=_d_list, default=list(DEFAULT_D_VALUES))
    c.add_argument("--kappa", type=_positive)
    c.add_argument("--xmax", type=_positive, help="halfline truncation (default 20/kappa)")
    c.add_argument("--nodes", type=int, default=64, help="Gauss-Legendre nodes per panel")
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "normalize": cmd_normalize,
    "build": cmd_build,
    "kernel": cmd_kernel,
    "converge": cmd_converge,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (OSError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NotAdmissible, RankAmbiguous) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (DegenerateDenominator, SingularM, QuadratureNotConverged) as exc:
        print(f"error at d={exc.d}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InsufficientPoints, KappaTooSmall, QGVertexError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
