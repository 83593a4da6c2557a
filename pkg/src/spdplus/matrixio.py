"""Matrix file formats.

JSON schema::

    {"name": str, "field": "real" | "complex", "dim": n, "data": [[...], ...]}

with complex scalars written as ``[re, im]``. CSV files hold a plain n x n
grid of real numbers; the matrix name is the file stem.
"""

import csv
import json
import math
from pathlib import Path

import numpy as np

from .errors import SpdPlusError
from .matcore import validate_hermitian


class MatrixFormatError(SpdPlusError):
    pass


def encode_float(x):
    """JSON-safe float: infinities become the strings ``"inf"``/``"-inf"``."""
    x = float(x)
    if math.isfinite(x):
        return x
    if math.isnan(x):
        raise ValueError("NaN cannot be serialized")
    return "inf" if x > 0 else "-inf"


def matrix_to_dict(name, M):
    M = np.asarray(M)
    if np.iscomplexobj(M):
        data = [[[float(z.real), float(z.imag)] for z in row] for row in M]
        kind = "complex"
    else:
        data = [[float(x) for x in row] for row in M]
        kind = "real"
    return {"name": name, "field": kind, "dim": int(M.shape[0]), "data": data}


def matrix_from_dict(obj, tol=1e-12):
    """Parse a JSON matrix object; returns ``(name, HermitianMatrix)``."""
    try:
        name = str(obj["name"])
        kind = obj.get("field", "real")
        rows = obj["data"]
        if kind == "complex":
            arr = np.array(
                [[complex(re, im) for re, im in row] for row in rows], dtype=complex
            )
        elif kind == "real":
            arr = np.array(rows, dtype=float)
        else:
            raise MatrixFormatError(f"unknown field {kind!r}")
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"malformed matrix object: {exc}") from exc
    if "dim" in obj and arr.ndim == 2 and arr.shape[0] != obj["dim"]:
        raise MatrixFormatError(f"dim {obj['dim']} does not match data {arr.shape}")
    return name, validate_hermitian(arr, tol)


def load_matrix(path):
    path = Path(path)
    try:
        if path.suffix.lower() == ".csv":
            with open(path, newline="") as fh:
                rows = [[float(x) for x in row] for row in csv.reader(fh) if row]
            return path.stem, validate_hermitian(np.array(rows, dtype=float))
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, ValueError) as exc:
        raise MatrixFormatError(f"cannot read {path}: {exc}") from exc
    return matrix_from_dict(obj)


def dumps(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def save_matrix(path, name, M):
    Path(path).write_text(dumps(matrix_to_dict(name, M)))
