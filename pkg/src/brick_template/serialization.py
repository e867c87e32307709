"""Matrix files in CSV, JSON and Matrix Market form.

CSV::

    # <name> <rows> <cols>
    v11,v12,...
    ...

with values rendered to 17 significant digits so that doubles round-trip.
"""

from __future__ import annotations

import io
import json
import os
import tempfile
from dataclasses import dataclass

import numpy as np
import scipy.io
import scipy.sparse

FORMATS = ("csv", "json", "matrix-market")

# matrices with a sparse, structured pattern are written in coordinate form
SPARSE_KINDS = frozenset({"L", "Hh", "W"})


@dataclass(frozen=True)
class MatrixFile:
    name: str
    rows: int
    cols: int
    values: np.ndarray  # shape (rows, cols)


def _check_format(fmt: str) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    return fmt


def _render(v: float) -> str:
    return format(float(v), ".17g")


def serialize_matrix(M, name: str, fmt: str = "csv") -> bytes:
    _check_format(fmt)
    M = np.atleast_2d(np.asarray(M, dtype=float))
    rows, cols = M.shape
    if fmt == "csv":
        lines = [f"# {name} {rows} {cols}"]
        lines += [",".join(_render(v) for v in row) for row in M]
        return ("\n".join(lines) + "\n").encode()
    if fmt == "json":
        doc = {"name": name, "rows": rows, "cols": cols, "data": [float(v) for v in M.ravel()]}
        return (json.dumps(doc) + "\n").encode()
    buf = io.BytesIO()
    target = scipy.sparse.coo_matrix(M) if name in SPARSE_KINDS else M
    scipy.io.mmwrite(buf, target, comment=f"name: {name}", field="real", precision=17, symmetry="general")
    return buf.getvalue()


def read_matrix(data: bytes, fmt: str = "csv") -> MatrixFile:
    _check_format(fmt)
    if fmt == "csv":
        text = data.decode()
        header, *body = text.splitlines()
        _, name, rows, cols = header.split()
        rows, cols = int(rows), int(cols)
        values = np.array([[float(v) for v in line.split(",")] for line in body if line], dtype=float)
        return MatrixFile(name, rows, cols, values.reshape(rows, cols))
    if fmt == "json":
        doc = json.loads(data)
        values = np.array(doc["data"], dtype=float).reshape(doc["rows"], doc["cols"])
        return MatrixFile(doc["name"], doc["rows"], doc["cols"], values)
    name = ""
    for line in data.decode().splitlines()[1:]:
        if not line.startswith("%"):
            break
        if line[1:].strip().startswith("name:"):
            name = line.split("name:", 1)[1].strip()
    M = scipy.io.mmread(io.BytesIO(data))
    values = M.toarray() if scipy.sparse.issparse(M) else np.asarray(M, dtype=float)
    return MatrixFile(name, values.shape[0], values.shape[1], values)


def atomic_write(path: str | os.PathLike, data: bytes) -> None:
    """Write ``data`` to ``path`` through a temporary file and rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
