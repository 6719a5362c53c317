"""JSON matrix files: {"n": int, "entries": [[{"re": x, "im": y}, ...], ...]}.

Entries may be JSON numbers or decimal strings; output uses strings with 17
significant digits so that doubles round-trip exactly.
"""

import hashlib
import json

import numpy as np

from .linalg import MAX_DIM


class MatrixParseError(ValueError):
    pass


class UnsupportedMatrix(ValueError):
    pass


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise MatrixParseError(f"{where}: expected a number or decimal string")
    try:
        val = float(x)
    except ValueError as exc:
        raise MatrixParseError(f"{where}: cannot parse {x!r}") from exc
    if not np.isfinite(val):
        raise MatrixParseError(f"{where}: non-finite value")
    return val


def parse_matrix(doc):
    """Build a complex array from a decoded JSON document."""
    if not isinstance(doc, dict) or "n" not in doc or "entries" not in doc:
        raise MatrixParseError('expected an object with keys "n" and "entries"')
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise MatrixParseError('"n" must be a positive integer')
    rows = doc["entries"]
    if not isinstance(rows, list) or len(rows) != n or any(
        not isinstance(r, list) or len(r) != n for r in rows
    ):
        raise MatrixParseError(f'"entries" must be an {n}x{n} array')
    if n > MAX_DIM:
        raise UnsupportedMatrix(f"dimension {n} exceeds {MAX_DIM}")
    A = np.zeros((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        for j, e in enumerate(row):
            where = f"entry ({i}, {j})"
            if isinstance(e, dict):
                extra = set(e) - {"re", "im"}
                if extra:
                    raise MatrixParseError(f"{where}: unexpected keys {sorted(extra)}")
                A[i, j] = complex(_number(e.get("re", 0), where), _number(e.get("im", 0), where))
            else:
                A[i, j] = _number(e, where)
    return A


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"invalid JSON: {exc}") from exc
    return parse_matrix(doc)


def read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def fmt(x):
    return format(float(x), ".17g")


def matrix_doc(A):
    A = np.asarray(A, dtype=np.complex128)
    return {
        "n": int(A.shape[0]),
        "entries": [[{"re": fmt(z.real), "im": fmt(z.imag)} for z in row] for row in A],
    }


def dumps(A):
    return json.dumps(matrix_doc(A), indent=1, sort_keys=True) + "\n"


def write_matrix(A, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(A))


def matrix_hash(A):
    """SHA-256 of the canonical JSON encoding."""
    return hashlib.sha256(json.dumps(matrix_doc(A), sort_keys=True).encode()).hexdigest()
