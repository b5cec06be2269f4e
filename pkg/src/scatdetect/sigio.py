"""File formats: signal/matrix CSV, JSON sidecars, raw binary dumps, manifests.

All writers are atomic (temp file + rename) and deterministic: floats are
serialized with ``repr``, whose shortest round-trip form parses back to the
identical double.
"""

from __future__ import annotations

import hashlib
import json
import os

import numpy as np

from .errors import InputError


def write_text(path, text: str) -> None:
    """Atomic text write: temp file in the same directory, then rename."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as handle:
        handle.write(text)
    os.replace(tmp, path)


def _atomic_write_bytes(path, blob: bytes) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as handle:
        handle.write(blob)
    os.replace(tmp, path)


def _format_row(row) -> str:
    return ",".join(repr(float(v)) for v in row)


def read_signal_csv(path) -> tuple[list[str], np.ndarray]:
    """Parse a signal file: header of channel names, one sample row per line.

    Rejects ragged rows and non-finite samples with the offending location.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise InputError(f"{path}: empty signal file")
    names = [name.strip() for name in lines[0].split(",")]
    if not names or any(not name for name in names):
        raise InputError(f"{path}: line 1: empty channel name in header")
    width = len(names)
    rows = np.empty((len(lines) - 1, width), dtype=np.float64)
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != width:
            raise InputError(
                f"{path}: line {lineno}: expected {width} values, found {len(parts)}"
            )
        for col, part in enumerate(parts):
            try:
                value = float(part)
            except ValueError as exc:
                raise InputError(
                    f"{path}: line {lineno}, column {col + 1}: cannot parse {part.strip()!r}"
                ) from exc
            if not np.isfinite(value):
                raise InputError(
                    f"{path}: line {lineno}, column {col + 1}: non-finite sample"
                )
            rows[lineno - 2, col] = value
    if rows.shape[0] == 0:
        raise InputError(f"{path}: no samples")
    return names, rows


def write_signal_csv(path, names: list[str], data: np.ndarray) -> None:
    data = np.asarray(data, dtype=np.float64)
    if data.ndim == 1:
        data = data[:, None]
    if data.shape[1] != len(names):
        raise ValueError("channel count mismatch")
    lines = [",".join(names)]
    lines.extend(_format_row(row) for row in data)
    _atomic_write_text(path, "\n".join(lines) + "\n")


def write_matrix_csv(path, matrix) -> None:
    """Numeric CSV, one time step per row; vectors become a single column."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim == 1:
        matrix = matrix[:, None]
    lines = [_format_row(row) for row in matrix]
    _atomic_write_text(path, "\n".join(lines) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as handle:
        rows = [
            [float(part) for part in line.split(",")]
            for line in handle.read().splitlines()
            if line
        ]
    return np.asarray(rows, dtype=np.float64)


def write_json(path, payload) -> None:
    _atomic_write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def write_binary(path, array) -> None:
    """Raw little-endian float64 dump plus a JSON shape sidecar."""
    array = np.asarray(array, dtype=np.float64)
    _atomic_write_bytes(path, array.astype("<f8").tobytes(order="C"))
    write_json(f"{path}.json", {"dtype": "float64-le", "order": "C", "shape": list(array.shape)})


def read_binary(path) -> np.ndarray:
    meta = read_json(f"{path}.json")
    with open(path, "rb") as handle:
        flat = np.frombuffer(handle.read(), dtype="<f8")
    return flat.reshape(meta["shape"])


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(out_dir, config_dict: dict, artifact_paths: list[str], extra: dict | None = None) -> None:
    """Manifest with the config echo and a content hash per emitted artifact."""
    files = {}
    for rel in sorted(artifact_paths):
        files[rel] = sha256_file(os.path.join(out_dir, rel))
    payload = {"config": config_dict, "files": files}
    if extra:
        payload.update(extra)
    write_json(os.path.join(out_dir, "manifest.json"), payload)
