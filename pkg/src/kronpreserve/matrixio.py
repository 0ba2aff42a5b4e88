"""JSON matrix files: ``{"rows": r, "cols": c, "data": [[re, im], ...]}`` (row-major).

Numbers are written with 17 significant digits so a double survives the round
trip exactly.
"""

from __future__ import annotations

import json
import math

import numpy as np

from ._validation import NonFiniteError, ShapeError, check_matrix


class MatrixFileError(ValueError):
    """The file does not follow the matrix schema."""


def _num(x: float) -> str:
    if not math.isfinite(x):
        raise NonFiniteError("matrix files cannot hold non-finite values")
    text = f"{x:.17g}"
    # keep a JSON float literal even for integral values
    if not any(c in text for c in ".eEn"):
        text += ".0"
    return text


def dumps_matrix(a) -> str:
    a = check_matrix(a)
    rows, cols = a.shape
    data = ",\n    ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in a.reshape(-1))
    return f'{{\n  "rows": {rows},\n  "cols": {cols},\n  "data": [\n    {data}\n  ]\n}}\n'


def loads_matrix(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not {"rows", "cols", "data"} <= doc.keys():
        raise MatrixFileError("expected an object with rows, cols and data")
    rows, cols, data = doc["rows"], doc["cols"], doc["data"]
    if not (isinstance(rows, int) and isinstance(cols, int)) or rows < 1 or cols < 1:
        raise MatrixFileError("rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFileError(f"data must hold rows*cols = {rows * cols} entries")
    values = []
    for entry in data:
        if (not isinstance(entry, list) or len(entry) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)):
            raise MatrixFileError(f"bad entry {entry!r}; expected [re, im]")
        values.append(complex(entry[0], entry[1]))
    try:
        return check_matrix(np.array(values, dtype=complex).reshape(rows, cols))
    except (NonFiniteError, ShapeError) as exc:
        raise MatrixFileError(str(exc)) from None


def read_matrix(path) -> np.ndarray:
    with open(path, encoding="utf-8") as fh:
        return loads_matrix(fh.read())


def write_matrix(path, a) -> None:
    text = dumps_matrix(a)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
