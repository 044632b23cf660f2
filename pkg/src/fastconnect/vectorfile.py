"""Binary and text coefficient-vector files.

Binary layout: ``FLCV1`` magic, one flags byte whose low nibble is the format
version, u32 little-endian length, then that many little-endian float64 values.
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FormatError

__all__ = ["MAGIC", "VERSION", "read_vector", "write_vector", "read_text", "write_text"]

MAGIC = b"FLCV1"
VERSION = 1
_HEAD = struct.Struct("<BI")


def write_vector(path, values) -> None:
    v = np.ascontiguousarray(values, dtype="<f8")
    if v.ndim != 1:
        raise FormatError(f"expected a 1-D vector, got shape {v.shape}")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEAD.pack(VERSION, v.shape[0]))
        fh.write(v.tobytes())


def read_vector(path) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[: len(MAGIC)] != MAGIC:
        raise FormatError(f"{path}: bad magic, not a vector file")
    off = len(MAGIC)
    if len(data) < off + _HEAD.size:
        raise FormatError(f"{path}: truncated header")
    flags, n = _HEAD.unpack_from(data, off)
    if flags & 0x0F != VERSION:
        raise FormatError(f"{path}: unsupported version {flags & 0x0F}")
    payload = data[off + _HEAD.size :]
    if len(payload) != 8 * n:
        raise FormatError(f"{path}: header says {n} values, payload holds {len(payload) / 8:g}")
    return np.frombuffer(payload, dtype="<f8").astype(np.float64)


def read_text(path) -> np.ndarray:
    """One float per line; blank lines are skipped."""
    vals = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                vals.append(float(line))
            except ValueError:
                raise FormatError(f"{path}:{lineno}: not a number: {line!r}") from None
    return np.array(vals, dtype=np.float64)


def write_text(path, values) -> None:
    with open(path, "w") as fh:
        for x in np.asarray(values, dtype=np.float64):
            fh.write(f"{float(x)!r}\n")
