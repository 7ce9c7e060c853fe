"""Binary field snapshots.

Layout (little-endian)::

    magic      8 bytes   b"GRDFORM1" (forms) or b"GRDGRUP1" (group fields)
    dim        int32
    sizes      int32[dim]
    degree     int32     (0 for group fields)
    m          int32     algebra dimension; group fields: 1 (u1 angle) or 4 (su2 quaternion)
    signature  int8[dim]
    spacings   float64[dim]
    boundary   uint8     0 periodic, 1 clamped
    margin     int32
    data       float64, C order, shape (components, m, *sizes)
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .gauge import GroupField
from .lattice import FormField, LatticeChart, MetricSignature
from .lie import SU2, U1

__all__ = ["write_snapshot", "read_snapshot", "snapshot_bytes", "parse_snapshot", "SnapshotError"]

FORM_MAGIC = b"GRDFORM1"
GROUP_MAGIC = b"GRDGRUP1"
_BOUNDARY = ("periodic", "clamped")


class SnapshotError(ValueError):
    """Malformed or truncated snapshot."""


def _header(magic, chart: LatticeChart, degree: int, m: int, margin: int) -> bytes:
    dim = chart.dim
    return b"".join([
        magic,
        struct.pack(f"<i{dim}i", dim, *chart.sizes),
        struct.pack("<ii", degree, m),
        struct.pack(f"<{dim}b", *chart.signature.diag),
        struct.pack(f"<{dim}d", *chart.spacings),
        struct.pack("<Bi", _BOUNDARY.index(chart.boundary), margin),
    ])


def snapshot_bytes(obj) -> bytes:
    if isinstance(obj, FormField):
        head = _header(FORM_MAGIC, obj.chart, obj.degree, obj.algebra.m, obj.margin)
        data = obj.data
    elif isinstance(obj, GroupField):
        head = _header(GROUP_MAGIC, obj.chart, 0, obj.algebra.group_dim, 0)
        data = obj.data[None]
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return head + np.ascontiguousarray(data, dtype="<f8").tobytes()


def write_snapshot(path, obj) -> Path:
    path = Path(path)
    path.write_bytes(snapshot_bytes(obj))
    return path


class _Reader:
    def __init__(self, buf: bytes):
        self.buf, self.pos = buf, 0

    def take(self, fmt):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.buf):
            raise SnapshotError("snapshot is truncated")
        out = struct.unpack_from(fmt, self.buf, self.pos)
        self.pos += size
        return out


def parse_snapshot(buf: bytes):
    r = _Reader(buf)
    magic = bytes(buf[:8])
    if magic not in (FORM_MAGIC, GROUP_MAGIC):
        raise SnapshotError("not a field snapshot (bad magic)")
    r.pos = 8
    (dim,) = r.take("<i")
    if dim not in (2, 3, 4):
        raise SnapshotError(f"unsupported dimension {dim}")
    sizes = r.take(f"<{dim}i")
    degree, m = r.take("<ii")
    sig = r.take(f"<{dim}b")
    spacings = r.take(f"<{dim}d")
    boundary, margin = r.take("<Bi")
    if boundary > 1:
        raise SnapshotError("unknown boundary flag")
    try:
        chart = LatticeChart(sizes, spacings, _BOUNDARY[boundary], MetricSignature(sig))
    except ValueError as exc:
        raise SnapshotError(f"invalid chart in header: {exc}") from exc
    if magic == FORM_MAGIC:
        algebra = {1: U1, 3: SU2}.get(m)
        if algebra is None or not 0 <= degree <= dim:
            raise SnapshotError(f"unsupported form header (degree {degree}, m {m})")
        ncomp = len(FormField.zeros(chart, degree, algebra).indices)
        shape = (ncomp, m) + tuple(sizes)
    else:
        algebra = {1: U1, 4: SU2}.get(m)
        if algebra is None:
            raise SnapshotError(f"unsupported group storage size {m}")
        shape = (1, m) + tuple(sizes)
    count = int(np.prod(shape))
    if len(buf) - r.pos != 8 * count:
        raise SnapshotError(f"expected {8 * count} data bytes, found {len(buf) - r.pos}")
    data = np.frombuffer(buf, dtype="<f8", count=count, offset=r.pos).reshape(shape).astype(float)
    if magic == FORM_MAGIC:
        return FormField(chart, degree, data, algebra, margin)
    return GroupField(chart, algebra, data[0])


def read_snapshot(path):
    return parse_snapshot(Path(path).read_bytes())
