"""Binary field snapshots and CSV energy logs.

Record layout (little-endian): magic ``b"NLKG"``, version u32, dim u32,
n u32, L f64, m f64, lambda f64, kind u8, then row-major f64 samples.
Kind 0 is a real field, 1 a phase-space point (phi then pi), 2 a complex
profile (interleaved re, im).  Trajectories are concatenated records.
"""
import csv
import struct

import numpy as np

from .grid import PhaseSpacePoint, make_grid

MAGIC = b"NLKG"
VERSION = 1
HEADER = struct.Struct("<4sIIIdddB")
REAL, PHASE, COMPLEX = 0, 1, 2


class SnapshotError(ValueError):
    pass


def _kind_of(obj):
    if isinstance(obj, PhaseSpacePoint):
        return PHASE
    if np.iscomplexobj(obj):
        return COMPLEX
    return REAL


def encode(grid, obj):
    kind = _kind_of(obj)
    head = HEADER.pack(MAGIC, VERSION, grid.dim, grid.n, grid.box_length, grid.mass,
                       grid.coupling, kind)
    if kind == PHASE:
        arrays = [grid.check(obj.phi), grid.check(obj.pi)]
    elif kind == COMPLEX:
        z = grid.check(np.asarray(obj, complex))
        arrays = [np.stack([z.real, z.imag], axis=-1)]
    else:
        arrays = [grid.check(np.asarray(obj, float))]
    body = b"".join(np.ascontiguousarray(a, dtype="<f8").tobytes() for a in arrays)
    return head + body


def _payload_len(grid, kind):
    return grid.n ** grid.dim * (1 if kind == REAL else 2) * 8


def decode_from(buf, offset=0):
    """Decode one record starting at ``offset``; returns ``(grid, obj, next_offset)``."""
    if len(buf) - offset < HEADER.size:
        raise SnapshotError("truncated snapshot header")
    magic, version, dim, n, L, m, lam, kind = HEADER.unpack_from(buf, offset)
    if magic != MAGIC:
        raise SnapshotError(f"bad magic {magic!r}")
    if version != VERSION:
        raise SnapshotError(f"unsupported snapshot version {version}")
    if kind not in (REAL, PHASE, COMPLEX):
        raise SnapshotError(f"unknown snapshot kind {kind}")
    grid = make_grid(dim, n, L, m, lam)
    start = offset + HEADER.size
    end = start + _payload_len(grid, kind)
    if len(buf) < end:
        raise SnapshotError("truncated snapshot payload")
    data = np.frombuffer(buf, dtype="<f8", count=(end - start) // 8, offset=start)
    data = data.astype(np.float64)
    if kind == REAL:
        obj = data.reshape(grid.shape)
    elif kind == PHASE:
        phi, pi = data.reshape((2,) + grid.shape)
        obj = PhaseSpacePoint(phi.copy(), pi.copy())
    else:
        pairs = data.reshape(grid.shape + (2,))
        obj = pairs[..., 0] + 1j * pairs[..., 1]
    return grid, obj, end


def write_snapshot(path, grid, obj):
    with open(path, "wb") as fh:
        fh.write(encode(grid, obj))


def read_snapshot(path):
    """Returns ``(grid, obj)`` for a single-record file."""
    with open(path, "rb") as fh:
        buf = fh.read()
    grid, obj, end = decode_from(buf)
    if end != len(buf):
        raise SnapshotError(f"{len(buf) - end} trailing bytes after snapshot record")
    return grid, obj


def write_trajectory(path, grid, states):
    with open(path, "wb") as fh:
        for s in states:
            fh.write(encode(grid, s))


def read_trajectory(path):
    with open(path, "rb") as fh:
        buf = fh.read()
    out, offset, grid = [], 0, None
    while offset < len(buf):
        grid, obj, offset = decode_from(buf, offset)
        out.append(obj)
    return grid, out


def write_energy_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "energy", "sup_phi", "l2_phi"])
        for row in rows:
            w.writerow([repr(float(v)) for v in row])
