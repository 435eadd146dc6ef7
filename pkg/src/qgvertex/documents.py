"""JSON documents for couplings and ST forms.

Complex numbers are ``[re, im]`` pairs, matrices are row-major nested lists
and permutations are 1-based.  Written values are rounded to ``DIGITS``
decimals so that repeated normalization produces byte-identical files.
"""

import json

import numpy as np

from .coupling import Coupling, STForm
from .errors import DimensionMismatch, DocumentError

DIGITS = 12


def _clean(x):
    x = round(float(x), DIGITS)
    return 0.0 if x == 0 else x


def matrix_to_pairs(m):
    return [[[_clean(z.real), _clean(z.imag)] for z in row] for row in np.asarray(m, dtype=complex)]


def pairs_to_matrix(data, rows, cols, name):
    """Parse ``rows x cols`` nested ``[re, im]`` pairs."""
    if not isinstance(data, list) or len(data) != rows:
        raise DocumentError(f"{name} must have {rows} rows")
    out = np.zeros((rows, cols), dtype=complex)
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != cols:
            raise DocumentError(f"{name} row {i + 1} must have {cols} entries")
        for j, z in enumerate(row):
            if not (isinstance(z, list) and len(z) == 2 and all(isinstance(t, (int, float)) for t in z)):
                raise DocumentError(f"{name}[{i + 1}][{j + 1}] must be a [re, im] pair")
            out[i, j] = complex(z[0], z[1])
    return out


def _int_field(doc, key):
    value = doc.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise DocumentError(f"field '{key}' must be an integer")
    return value


def coupling_to_doc(c):
    return {"n": c.n, "A": matrix_to_pairs(c.A), "B": matrix_to_pairs(c.B)}


def st_to_doc(f):
    return {"n": f.n, "m": f.m, "perm": list(f.perm), "S": matrix_to_pairs(f.S), "T": matrix_to_pairs(f.T)}


def coupling_from_doc(doc):
    n = _int_field(doc, "n")
    if n < 1:
        raise DocumentError("n must be positive")
    return Coupling(pairs_to_matrix(doc.get("A"), n, n, "A"), pairs_to_matrix(doc.get("B"), n, n, "B"))


def st_from_doc(doc):
    n, m = _int_field(doc, "n"), _int_field(doc, "m")
    if not 0 <= m <= n:
        raise DocumentError(f"need 0 <= m <= n, got m={m}, n={n}")
    perm = doc.get("perm")
    if not isinstance(perm, list):
        raise DocumentError("field 'perm' must be a list")
    S = pairs_to_matrix(doc.get("S"), m, m, "S")
    T = pairs_to_matrix(doc.get("T"), m, n - m, "T")
    try:
        return STForm(n, m, tuple(perm), S, T)
    except (ValueError, DimensionMismatch) as exc:
        raise DocumentError(str(exc)) from exc


def is_st_doc(doc):
    return isinstance(doc, dict) and "m" in doc


def load_document(path):
    """Read a coupling or ST-form document; returns ``(kind, object)``."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError("top-level JSON value must be an object")
    if is_st_doc(doc):
        return "st", st_from_doc(doc)
    try:
        return "coupling", coupling_from_doc(doc)
    except DimensionMismatch as exc:
        raise DocumentError(str(exc)) from exc


def dumps(doc):
    return json.dumps(doc, indent=2) + "\n"
