"""Binary field format CRF1.

Layout: 8-byte magic "CRFIELD1", little-endian u32 n, f64 half width,
u8 space tag (0 = position, 1 = frequency), then n^2 complex samples as
interleaved little-endian f64 (re, im), row-major with y varying slowest.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .grid import FREQUENCY, POSITION, Field, GridSpec

MAGIC = b"CRFIELD1"
_HEADER = struct.Struct("<8sIdB")
_SPACE_TAGS = {POSITION: 0, FREQUENCY: 1}
_TAG_SPACES = {v: k for k, v in _SPACE_TAGS.items()}


def write_field(path: str | Path, field: Field) -> None:
    g = field.grid
    header = _HEADER.pack(MAGIC, g.n, g.half_width, _SPACE_TAGS[field.space])
    payload = np.ascontiguousarray(field.values, dtype="<c16").tobytes()
    Path(path).write_bytes(header + payload)


def read_field(path: str | Path) -> Field:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated CRF1 header")
    magic, n, half_width, tag = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if tag not in _TAG_SPACES:
        raise ValueError(f"{path}: unknown space tag {tag}")
    expected = _HEADER.size + 16 * n * n
    if len(raw) != expected:
        raise ValueError(f"{path}: size mismatch, expected {expected} bytes, got {len(raw)}")
    values = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).reshape(n, n)
    return Field(GridSpec(n, half_width), values.astype(np.complex128), _TAG_SPACES[tag])
