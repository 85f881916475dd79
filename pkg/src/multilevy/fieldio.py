"""Import/export of gridded fields.

CSV: header row, one line per grid node in C order, coordinate columns
followed by re and im, 17 significant digits (lossless double round-trip).

Binary: little-endian, header = magic (8 bytes, encodes the field side),
uint32 dimension n, n uint32 point counts, n float64 frequency spacings;
payload = interleaved re/im float64 pairs in C order.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import InputError
from .spectral import FrequencyGrid, SpatialField, SpectralField

__all__ = [
    "write_field_csv",
    "read_field_csv",
    "write_field_binary",
    "read_field_binary",
    "format_float",
]

_MAGIC = {"space": b"MLFLDX01", "frequency": b"MLFLDK01"}
_SIDE = {SpatialField: "space", SpectralField: "frequency"}


def format_float(x: float) -> str:
    """17 significant digits: enough to round-trip any double exactly."""
    return f"{x:.17g}"


def _side_of(field) -> str:
    side = _SIDE.get(type(field))
    if side is None:
        raise InputError(f"not a field: {type(field).__name__}")
    return side


def _coordinates(field) -> np.ndarray:
    g = field.grid
    pts = g.x_points() if isinstance(field, SpatialField) else g.xi_points()
    return pts.reshape(-1, g.n)


def write_field_csv(field, path) -> None:
    g = field.grid
    side = _side_of(field)
    name = "x" if side == "space" else "xi"
    header = ",".join([f"{name}{i}" for i in range(g.n)] + ["re", "im"])
    coords = _coordinates(field)
    values = field.values.reshape(-1)
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row, v in zip(coords, values):
            cols = [format_float(c) for c in row] + [
                format_float(v.real),
                format_float(v.imag),
            ]
            fh.write(",".join(cols) + "\n")


def read_field_csv(path):
    """Reconstruct a field from CSV; the grid is inferred from the coordinates."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if len(header) < 3 or header[-2:] != ["re", "im"]:
        raise InputError("field CSV must end with re and im columns")
    n = len(header) - 2
    side = "space" if header[0].startswith("x") and not header[0].startswith("xi") else "frequency"
    coords = data[:, :n]
    values = data[:, n] + 1j * data[:, n + 1]

    axes = [np.unique(coords[:, i]) for i in range(n)]
    shape = tuple(len(a) for a in axes)
    if int(np.prod(shape)) != coords.shape[0]:
        raise InputError("field CSV does not cover a full tensor grid")
    spacings = [float(a[1] - a[0]) for a in axes]
    if side == "space":
        # dx = 2 pi / (N dxi)  =>  dxi = 2 pi / (N dx)
        dxi = tuple(2.0 * np.pi / (m * d) for m, d in zip(shape, spacings))
    else:
        dxi = tuple(spacings)
    grid = FrequencyGrid(shape=shape, dxi=dxi)
    values = values.reshape(shape)
    return SpatialField(grid, values) if side == "space" else SpectralField(grid, values)


def write_field_binary(field, path) -> None:
    g = field.grid
    side = _side_of(field)
    with open(path, "wb") as fh:
        fh.write(_MAGIC[side])
        fh.write(struct.pack("<I", g.n))
        fh.write(struct.pack(f"<{g.n}I", *g.shape))
        fh.write(struct.pack(f"<{g.n}d", *g.dxi))
        flat = field.values.reshape(-1)
        payload = np.empty(2 * flat.size, dtype="<f8")
        payload[0::2] = flat.real
        payload[1::2] = flat.imag
        fh.write(payload.tobytes())


def read_field_binary(path):
    raw = Path(path).read_bytes()
    magic, raw = raw[:8], raw[8:]
    sides = {v: k for k, v in _MAGIC.items()}
    if magic not in sides:
        raise InputError("unrecognized field file magic")
    side = sides[magic]
    (n,) = struct.unpack("<I", raw[:4])
    raw = raw[4:]
    shape = struct.unpack(f"<{n}I", raw[: 4 * n])
    raw = raw[4 * n :]
    dxi = struct.unpack(f"<{n}d", raw[: 8 * n])
    raw = raw[8 * n :]
    grid = FrequencyGrid(shape=shape, dxi=dxi)
    count = int(np.prod(shape))
    payload = np.frombuffer(raw, dtype="<f8", count=2 * count)
    values = (payload[0::2] + 1j * payload[1::2]).reshape(shape)
    return SpatialField(grid, values) if side == "space" else SpectralField(grid, values)
