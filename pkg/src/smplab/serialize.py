"""File formats for matrices and fixture descriptions.

Matrices travel in a small versioned binary container (magic, version, dim,
then row-major (re, im) float64 pairs) or in a human-readable text form.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

_MAGIC = b"QMAT"
_VERSION = 1


def matrix_to_bytes(a: np.ndarray) -> bytes:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    dim = a.shape[0]
    header = _MAGIC + struct.pack("<II", _VERSION, dim)
    flat = np.empty(2 * dim * dim, dtype=np.float64)
    flat[0::2] = a.real.ravel()
    flat[1::2] = a.imag.ravel()
    return header + flat.tobytes()


def matrix_from_bytes(data: bytes) -> np.ndarray:
    if data[:4] != _MAGIC:
        raise ValueError("not a matrix container (bad magic)")
    version, dim = struct.unpack("<II", data[4:12])
    if version != _VERSION:
        raise ValueError(f"unsupported container version {version}")
    flat = np.frombuffer(data[12:], dtype=np.float64)
    if flat.size != 2 * dim * dim:
        raise ValueError("truncated matrix container")
    return (flat[0::2] + 1j * flat[1::2]).reshape(dim, dim)


def save_matrix(path: str | Path, a: np.ndarray) -> None:
    Path(path).write_bytes(matrix_to_bytes(a))


def load_matrix(path: str | Path) -> np.ndarray:
    return matrix_from_bytes(Path(path).read_bytes())


def matrix_to_text(a: np.ndarray) -> str:
    """Readable form: a dim header, then one line per row of re,im pairs."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    lines = [f"qmat v{_VERSION} dim={a.shape[0]}"]
    for row in a:
        lines.append(" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row))
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> np.ndarray:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 3 or head[0] != "qmat" or not head[2].startswith("dim="):
        raise ValueError("bad text matrix header")
    dim = int(head[2][4:])
    if len(lines) != dim + 1:
        raise ValueError(f"expected {dim} rows, found {len(lines) - 1}")
    out = np.empty((dim, dim), dtype=np.complex128)
    for i, ln in enumerate(lines[1:]):
        cells = ln.split()
        if len(cells) != dim:
            raise ValueError(f"row {i} has {len(cells)} entries, expected {dim}")
        for j, cell in enumerate(cells):
            re, im = cell.split(",")
            out[i, j] = complex(float(re), float(im))
    return out


def save_fixture(path: str | Path, name: str, params: dict) -> None:
    """Declarative protocol fixture: a name plus a parameter record."""
    Path(path).write_text(json.dumps({"name": name, "params": params}, indent=2))


def load_fixture(path: str | Path) -> tuple[str, dict]:
    doc = json.loads(Path(path).read_text())
    if not isinstance(doc, dict) or "name" not in doc:
        raise ValueError("fixture file must be an object with a 'name' field")
    return str(doc["name"]), dict(doc.get("params", {}))
