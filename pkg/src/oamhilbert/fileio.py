"""Binary field files, PGM images, CSV tables and JSON run configuration."""

from __future__ import annotations

import csv
import io
import json
import os
import struct
import tempfile
from pathlib import Path

import jsonschema
import numpy as np

from .exceptions import ConfigError, FieldMagicError, FieldTruncatedError, FieldVersionError
from .fieldgrid import ComplexField, Grid, extract_intensity, extract_phase

MAGIC = b"OAMF"
VERSION = 1
_HEADER = struct.Struct("<4sIIIddd")


def _atomic_write(path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def field_to_bytes(field: ComplexField) -> bytes:
    g = field.grid
    header = _HEADER.pack(MAGIC, VERSION, g.nx, g.ny, g.dx, g.dy, field.wavelength)
    return header + np.ascontiguousarray(field.samples, dtype="<c16").tobytes()


def field_from_bytes(data: bytes) -> ComplexField:
    if len(data) < 4 or data[:4] != MAGIC:
        raise FieldMagicError(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
    if len(data) < _HEADER.size:
        raise FieldTruncatedError(f"header needs {_HEADER.size} bytes, file has {len(data)}")
    _, version, nx, ny, dx, dy, wavelength = _HEADER.unpack_from(data)
    if version != VERSION:
        raise FieldVersionError(f"unsupported field file version {version}, expected {VERSION}")
    expected = nx * ny * 16
    actual = len(data) - _HEADER.size
    if actual < expected:
        raise FieldTruncatedError(f"payload truncated: expected {expected} bytes, got {actual}")
    if actual > expected:
        raise FieldTruncatedError(f"payload length mismatch: expected {expected} bytes, got {actual}")
    samples = np.frombuffer(data, dtype="<c16", count=nx * ny, offset=_HEADER.size)
    return ComplexField(Grid(nx, ny, dx, dy), samples.reshape(ny, nx), wavelength)


def write_field(field: ComplexField, path) -> None:
    _atomic_write(path, field_to_bytes(field))


def read_field(path) -> ComplexField:
    return field_from_bytes(Path(path).read_bytes())


def pgm_bytes(values: np.ndarray, lo: float, hi: float) -> bytes:
    """16-bit binary PGM of ``values`` mapped linearly from ``[lo, hi]`` to ``[0, 65535]``."""
    values = np.asarray(values, dtype=float)
    span = hi - lo
    scaled = np.zeros_like(values) if span <= 0 else (values - lo) / span
    levels = np.round(np.clip(scaled, 0, 1) * 65535).astype(">u2")
    ny, nx = values.shape
    # row 0 is y_min; images are written top row first, so flip to put +y up
    return f"P5\n{nx} {ny}\n65535\n".encode() + levels[::-1].tobytes()


def write_intensity_pgm(field: ComplexField, path) -> None:
    intensity = extract_intensity(field)
    _atomic_write(path, pgm_bytes(intensity, 0.0, float(intensity.max())))


def write_phase_pgm(field: ComplexField, path) -> None:
    _atomic_write(path, pgm_bytes(extract_phase(field), -np.pi, np.pi))


def read_pgm(path) -> np.ndarray:
    """Parse a 16-bit PGM written by this module back to an array (rows as stored)."""
    data = Path(path).read_bytes()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    nx, ny = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=">u2").reshape(ny, nx)


def fmt(x: float) -> str:
    return f"{x:.9g}"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> None:
    _atomic_write(path, csv_text(header, rows).encode())


def write_json(path, obj) -> None:
    _atomic_write(path, (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode())


_POS = {"type": "number", "exclusiveMinimum": 0}
_INT = {"type": "integer"}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "required": ["nx", "ny", "dx", "dy"],
            "properties": {"nx": {"type": "integer", "minimum": 2}, "ny": {"type": "integer", "minimum": 2},
                           "dx": _POS, "dy": _POS},
        },
        "beam": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"wavelength": _POS, "waist": _POS},
        },
        "modes": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["l"],
                "properties": {"l": _INT, "p": {"type": "integer", "minimum": 0},
                               "re": {"type": "number"}, "im": {"type": "number"}},
            },
        },
        "grating": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "M": {"oneOf": [_INT, {"type": "array", "items": _INT, "minItems": 1}]},
                "period": _POS,
                "focal_length": _POS,
            },
        },
        "detector": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"radius": _POS},
        },
        "antenna": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "Ns": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
                "sigma": {"oneOf": [{"type": "number", "minimum": 0}, {"type": "null"}]},
                "band_limit": {"type": "integer", "minimum": 1},
                "input_modes": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["l"],
                        "properties": {"l": _INT, "re": {"type": "number"}, "im": {"type": "number"}},
                    },
                },
            },
        },
    },
}


def load_config(path) -> dict:
    """Read and validate a JSON run configuration; unknown keys are rejected."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return validate_config(doc)


def validate_config(doc) -> dict:
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config error at {where}: {exc.message}") from None
    return doc
