"""Direction-set documents, binary field files and atomic writes."""

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .directions import DirectionSet

FORMAT_VERSION = 1


def atomic_write(path, data):
    """Write ``data`` (str or bytes) to ``path`` via a temp file and rename."""
    path = Path(path)
    mode = "w" if isinstance(data, str) else "wb"
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _num(x):
    return format(float(x), ".17g")


def _dump(obj, indent=0):
    # json.dumps cannot be told to use 17 significant digits for floats
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(str(k))}: {_dump(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if all(isinstance(v, (int, float, np.floating, np.integer)) for v in obj):
            return "[" + ", ".join(_num(v) if isinstance(v, (float, np.floating)) else str(v) for v in obj) + "]"
        return "[\n" + ",\n".join(f"{pad}  {_dump(v, indent + 1)}" for v in obj) + f"\n{pad}]"
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return json.dumps(obj)


def directions_to_dict(dirs):
    return {
        "version": FORMAT_VERSION,
        "lambda": float(dirs.lam),
        "order": int(dirs.order),
        "basis": [[float(v) for v in row] for row in dirs.basis],
        "members": [[float(v) for v in row] for row in dirs.members],
        "tree": {str(k): directions_to_dict(c) for k, c in dirs.tree.items()},
    }


def directions_from_dict(doc):
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported direction-set version {doc.get('version')!r}")
    return DirectionSet(
        np.array(doc["members"], dtype=float),
        lam=float(doc["lambda"]),
        order=int(doc["order"]),
        basis=np.array(doc["basis"], dtype=float),
        tree={int(k): directions_from_dict(v) for k, v in doc.get("tree", {}).items()},
    )


def dumps_directions(dirs):
    return _dump(directions_to_dict(dirs)) + "\n"


def loads_directions(text):
    return directions_from_dict(json.loads(text))


def save_directions(dirs, path):
    atomic_write(path, dumps_directions(dirs))


def load_directions(path):
    return loads_directions(Path(path).read_text())


def encode_field(field):
    """Header line (JSON) followed by little-endian float64 samples, row-major.

    Complex fields interleave real and imaginary parts.
    """
    a = np.asarray(field)
    kind = "complex" if np.iscomplexobj(a) else "real"
    header = {"dims": a.ndim, "n": int(a.shape[0]), "kind": kind}
    if kind == "complex":
        raw = np.ascontiguousarray(a, dtype="<c16").view("<f8")
    else:
        raw = np.ascontiguousarray(a, dtype="<f8")
    return (json.dumps(header) + "\n").encode() + raw.tobytes()


def decode_field(blob):
    nl = blob.index(b"\n")
    header = json.loads(blob[:nl])
    dims, n, kind = int(header["dims"]), int(header["n"]), header["kind"]
    shape = (n,) * dims
    data = np.frombuffer(blob[nl + 1 :], dtype="<f8")
    if kind == "complex":
        if data.size != 2 * n**dims:
            raise ValueError("field file is truncated")
        return data.view("<c16").reshape(shape).astype(complex)
    if kind != "real":
        raise ValueError(f"unknown field kind {kind!r}")
    if data.size != n**dims:
        raise ValueError("field file is truncated")
    return data.reshape(shape).astype(float)


def save_field(field, path):
    atomic_write(path, encode_field(field))


def load_field(path):
    return decode_field(Path(path).read_bytes())
