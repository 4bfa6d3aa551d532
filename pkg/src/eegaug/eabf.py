"""EABF v1: a bit-exact binary container for window datasets.

Layout::

    bytes 0..3    magic "EABF"
    bytes 4..7    u32 little-endian version (currently 1)
    bytes 8..15   u64 little-endian header length H
    bytes 16..    UTF-8 JSON header, exactly H bytes
    rest          float32 little-endian payload, window-major then
                  channel-major then time (C order, shape (N, C, T))

The JSON header carries ``n_windows``, ``n_channels``, ``n_samples``,
``sfreq_hz``, ``channel_names``, optional ``channel_positions``, ``labels``,
``subjects`` and ``sessions``.  Payload bytes round-trip exactly; in-memory
float64 data is stored at float32 precision.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import DataError, FormatError, IoError, TruncationError
from .montage import Montage
from .window import Dataset

MAGIC = b"EABF"
VERSION = 1
_FIXED_PREFIX = 16  # magic + version + header length


def write_dataset(dataset: Dataset, path) -> None:
    """Write ``dataset`` to ``path`` in EABF v1.

    Raises
    ------
    DataError
        Non-finite samples or montage/channel mismatch, detected before
        any bytes are written.
    IoError
        Path cannot be opened or written.
    """
    if not np.all(np.isfinite(dataset.data)):
        raise DataError("dataset contains non-finite samples")
    names = dataset.montage.names
    if dataset.n_windows > 0 and len(names) != dataset.n_channels:
        raise DataError(
            f"montage has {len(names)} names, dataset has "
            f"{dataset.n_channels} channels"
        )
    header = {
        "n_windows": int(dataset.n_windows),
        "n_channels": int(dataset.n_channels),
        "n_samples": int(dataset.n_samples),
        "sfreq_hz": float(dataset.sfreq),
        "channel_names": list(names),
        "labels": [int(v) for v in dataset.labels],
        "subjects": [int(v) for v in dataset.subjects],
        "sessions": [int(v) for v in dataset.sessions],
    }
    if dataset.montage.positions is not None:
        header["channel_positions"] = [
            [float(v) for v in row] for row in dataset.montage.positions
        ]
    header_bytes = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    payload = np.ascontiguousarray(dataset.data, dtype="<f4").tobytes()
    try:
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(int(VERSION).to_bytes(4, "little"))
            fh.write(len(header_bytes).to_bytes(8, "little"))
            fh.write(header_bytes)
            fh.write(payload)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_dataset(path) -> Dataset:
    """Read an EABF v1 file back into a :class:`Dataset`.

    Raises
    ------
    FormatError
        Bad magic, unsupported version, or malformed header JSON.
    TruncationError
        Header or payload shorter/longer than the header promises.
    DataError
        NaN or infinity in the payload.
    IoError
        Path cannot be opened or read.
    """
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc

    if blob[:4] != MAGIC:
        raise FormatError(f"{path}: not an EABF file (bad magic)")
    if len(blob) < _FIXED_PREFIX:
        raise TruncationError(f"{path}: file shorter than the fixed prefix")
    version = int.from_bytes(blob[4:8], "little")
    if version != VERSION:
        raise FormatError(f"{path}: unsupported EABF version {version}")
    header_len = int.from_bytes(blob[8:16], "little")
    if len(blob) < _FIXED_PREFIX + header_len:
        raise TruncationError(f"{path}: truncated header")
    try:
        header = json.loads(blob[_FIXED_PREFIX:_FIXED_PREFIX + header_len])
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: header is not valid JSON: {exc}") from exc

    try:
        n_windows = int(header["n_windows"])
        n_channels = int(header["n_channels"])
        n_samples = int(header["n_samples"])
        sfreq = float(header["sfreq_hz"])
        names = tuple(header["channel_names"])
        labels = np.array(header["labels"], dtype=np.int64)
        subjects = np.array(header["subjects"], dtype=np.int64)
        sessions = np.array(header["sessions"], dtype=np.int64)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"{path}: incomplete header: {exc}") from exc

    expected = n_windows * n_channels * n_samples * 4
    payload = blob[_FIXED_PREFIX + header_len:]
    if len(payload) != expected:
        raise TruncationError(
            f"{path}: payload is {len(payload)} bytes, header promises {expected}"
        )
    raw = np.frombuffer(payload, dtype="<f4").astype(np.float64)
    data = raw.reshape(n_windows, n_channels, n_samples)
    if not np.all(np.isfinite(data)):
        raise DataError(f"{path}: payload contains non-finite samples")

    positions = header.get("channel_positions")
    montage = Montage(names, None if positions is None else np.array(positions))
    return Dataset(data, sfreq, labels, subjects, sessions, montage)


def read_header(path) -> dict:
    """Header JSON of an EABF file, without loading the payload."""
    try:
        with open(path, "rb") as fh:
            prefix = fh.read(_FIXED_PREFIX)
            if prefix[:4] != MAGIC:
                raise FormatError(f"{path}: not an EABF file (bad magic)")
            if len(prefix) < _FIXED_PREFIX:
                raise TruncationError(f"{path}: file shorter than the fixed prefix")
            header_len = int.from_bytes(prefix[8:16], "little")
            header_bytes = fh.read(header_len)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if len(header_bytes) < header_len:
        raise TruncationError(f"{path}: truncated header")
    try:
        return json.loads(header_bytes)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FormatError(f"{path}: header is not valid JSON: {exc}") from exc
